//! Étale proper groupoids over polytope charts: presentation data,
//! constructors for the canonical families, and exact validation.

pub mod averaging;
pub mod boundary;
pub mod functor;
pub mod wfp;

use crate::affine::AffineMap;
use crate::chart::{ChartAssignment, ChartComplex, ChartMap, MapFlags};
use crate::error::{Error, Result};
use crate::fiberprod::{fiber_product, FiberProduct};
use crate::forms::PPForm;
use crate::orient::{Orientation, RelOrientation};
use crate::polytope::Polytope;
use crate::rat::Rat;
use crate::report::{Check, SuiteOutcome};

/// An étale proper groupoid: objects, arrows, and the five structure maps.
/// Source and target are chart-wise invertible; properness holds because all
/// charts are compact.
#[derive(Clone, Debug)]
pub struct Groupoid {
    pub x0: ChartComplex,
    pub x1: ChartComplex,
    pub s: ChartMap,
    pub t: ChartMap,
    /// Composable pairs {(a, b) : s(a) = t(b)} in graph coordinates.
    pub composable: FiberProduct,
    /// Composition m(a, b) = a after b.
    pub m: ChartMap,
    pub inv: ChartMap,
    pub e: ChartMap,
    /// Partition of unity recorded by constructors when they know one.
    pub partition_hint: Option<PPForm>,
}

impl Groupoid {
    pub fn dim(&self) -> usize {
        self.x0.dim
    }

    /// Assemble a groupoid from the six maps; the composable complex is
    /// rebuilt, and `make_m` receives it to produce the composition map.
    pub fn assemble(
        x0: ChartComplex,
        x1: ChartComplex,
        s: ChartMap,
        t: ChartMap,
        make_m: impl FnOnce(&FiberProduct) -> Result<ChartMap>,
        inv: ChartMap,
        e: ChartMap,
    ) -> Result<Groupoid> {
        let s = as_local_diffeo(s, "source")?;
        let t = as_local_diffeo(t, "target")?;
        let composable = fiber_product(&x1, &s, &x1, &t, &x0)?;
        let m = as_local_diffeo(make_m(&composable)?, "composition")?;
        let inv = as_local_diffeo(inv, "inverse")?;
        let e = as_local_diffeo(e, "identity")?;
        Ok(Groupoid { x0, x1, s, t, composable, m, inv, e, partition_hint: None })
    }

    /// The groupoid with only identity arrows.
    pub fn trivial(m: ChartComplex) -> Result<Groupoid> {
        let id = ChartMap::identity(&m);
        let x1 = m.clone();
        Groupoid::assemble(
            m.clone(),
            x1,
            id.clone(),
            id.clone(),
            |cp| Ok(cp.proj_m.clone()),
            id.clone(),
            id,
        )
    }

    pub fn point() -> Result<Groupoid> {
        Groupoid::trivial(ChartComplex::point())
    }

    /// Cover groupoid of overlapping patches in a common ambient space:
    /// objects are the patches, arrows the pairwise intersections.
    pub fn cover(dim: usize, patches: Vec<Polytope>) -> Result<Groupoid> {
        let x0 = ChartComplex::new(dim, patches.clone())?;
        let n = patches.len();
        let mut arrow_charts = Vec::new();
        let mut pair_index = vec![vec![None; n]; n];
        let mut s_assign = Vec::new();
        let mut t_assign = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let meet = patches[a].intersect(&patches[b])?;
                if meet.is_empty() {
                    continue;
                }
                if !meet.is_full_dim() {
                    return Err(Error::Validation(format!(
                        "cover: patches {a} and {b} overlap in a lower-dimensional set"
                    )));
                }
                pair_index[a][b] = Some(arrow_charts.len());
                arrow_charts.push(meet);
                s_assign.push(ChartAssignment { target_chart: a, map: AffineMap::identity(dim) });
                t_assign.push(ChartAssignment { target_chart: b, map: AffineMap::identity(dim) });
            }
        }
        let x1 = ChartComplex::new(dim, arrow_charts)?;
        let ld = MapFlags { local_diffeo: true, strongly_smooth: false, proper: true, ..Default::default() };
        let s = ChartMap::new(&x1, &x0, s_assign, ld, vec![None; x1.len()])?;
        let t = ChartMap::new(&x1, &x0, t_assign, ld, vec![None; x1.len()])?;
        let pairs: Vec<(usize, usize)> = {
            let mut v = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if pair_index[a][b].is_some() {
                        v.push((a, b));
                    }
                }
            }
            v
        };
        let e_assign: Vec<ChartAssignment> = (0..n)
            .map(|a| ChartAssignment {
                target_chart: pair_index[a][a].expect("self-overlap exists"),
                map: AffineMap::identity(dim),
            })
            .collect();
        let inv_assign: Vec<ChartAssignment> = pairs
            .iter()
            .map(|&(a, b)| ChartAssignment {
                target_chart: pair_index[b][a].expect("mirror pair exists"),
                map: AffineMap::identity(dim),
            })
            .collect();
        let x0c = x0.clone();
        let x1c = x1.clone();
        let e = ChartMap::new(&x0, &x1, e_assign, ld, vec![None; x0.len()])?;
        let inv = ChartMap::new(&x1, &x1, inv_assign, ld, vec![None; x1.len()])?;
        let mut g = Groupoid::assemble(x0c, x1c.clone(), s, t, |cp| {
            // Arrow chart (alpha,beta) composed with (gamma,alpha) lands in
            // (gamma,beta); graph coordinates are the common point.
            let mut assign = Vec::with_capacity(cp.charts.len());
            for fc in &cp.charts {
                let (_, b1) = pairs[fc.m_chart];
                let (g2, a2) = pairs[fc.p_chart];
                debug_assert_eq!(pairs[fc.m_chart].0, a2);
                let target = pair_index[g2][b1].ok_or_else(|| {
                    Error::Geometry("cover composition lands in an empty pair".into())
                })?;
                assign.push(ChartAssignment { target_chart: target, map: fc.to_m.clone() });
            }
            ChartMap::new(&cp.complex, &x1c, assign, ld, vec![None; cp.charts.len()])
        }, inv, e)?;
        // A chain of 1-dimensional patches admits the cubic-blend partition.
        if dim == 1 && g.x0.len() > 1 {
            if let Ok(cells) = crate::epg::averaging::interval_chain_partition(&g.x0.charts) {
                if let Ok(rho) = PPForm::validated(&g.x0, 0, cells, Some(1)) {
                    g.partition_hint = Some(rho);
                }
            }
        }
        Ok(g)
    }

    /// Action groupoid of a finite group acting on a single-chart complex by
    /// affine maps. `table[g][h]` is the index of g*h; element 0 is the
    /// identity; `maps[g]` must send the chart onto itself exactly.
    pub fn action(base: ChartComplex, maps: Vec<AffineMap>, table: Vec<Vec<usize>>) -> Result<Groupoid> {
        if base.len() != 1 {
            return Err(Error::Unsupported("action groupoid needs a single chart".into()));
        }
        let chart = &base.charts[0];
        let dim = base.dim;
        let k = maps.len();
        if table.len() != k || table.iter().any(|r| r.len() != k) {
            return Err(Error::Validation("multiplication table shape".into()));
        }
        if maps[0] != AffineMap::identity(dim) {
            return Err(Error::Validation("element 0 must act as the identity".into()));
        }
        for (g, m) in maps.iter().enumerate() {
            if !m.is_invertible() {
                return Err(Error::Validation(format!("element {g} acts non-invertibly")));
            }
            if &chart.image_invertible(m)? != chart {
                return Err(Error::Validation(format!("element {g} does not preserve the chart")));
            }
        }
        // Homomorphism: map of g*h equals map of g composed with map of h.
        for g in 0..k {
            for h in 0..k {
                let composite = maps[g].compose(&maps[h])?;
                if composite != maps[table[g][h]] {
                    return Err(Error::Validation(format!(
                        "action is not a homomorphism at ({g},{h})"
                    )));
                }
            }
        }
        let inv_of = |g: usize| -> Result<usize> {
            (0..k)
                .find(|&h| table[g][h] == 0 && table[h][g] == 0)
                .ok_or_else(|| Error::Validation(format!("element {g} has no inverse")))
        };
        let x1 = ChartComplex::new(dim, vec![chart.clone(); k])?;
        let ld = MapFlags { local_diffeo: true, proper: true, ..Default::default() };
        let s = ChartMap::new(
            &x1,
            &base,
            (0..k)
                .map(|_| ChartAssignment { target_chart: 0, map: AffineMap::identity(dim) })
                .collect(),
            ld,
            vec![None; k],
        )?;
        let t = ChartMap::new(
            &x1,
            &base,
            maps.iter()
                .map(|m| ChartAssignment { target_chart: 0, map: m.clone() })
                .collect(),
            ld,
            vec![None; k],
        )?;
        let e = ChartMap::new(
            &base,
            &x1,
            vec![ChartAssignment { target_chart: 0, map: AffineMap::identity(dim) }],
            ld,
            vec![None; 1],
        )?;
        let mut inv_assign = Vec::with_capacity(k);
        for g in 0..k {
            inv_assign.push(ChartAssignment { target_chart: inv_of(g)?, map: maps[g].clone() });
        }
        let inv = ChartMap::new(&x1, &x1, inv_assign, ld, vec![None; k])?;
        let x1c = x1.clone();
        let maps_c = maps.clone();
        let table_c = table.clone();
        Groupoid::assemble(base, x1, s, t, move |cp| {
            // Pair (a, b) in charts (g, h): graph coordinate is x = s(a);
            // the composite arrow is (g*h, inverse(h)(x)).
            let mut assign = Vec::with_capacity(cp.charts.len());
            for fc in &cp.charts {
                let g = fc.m_chart;
                let h = fc.p_chart;
                let map = maps_c[h].inverse()?.compose(&fc.to_m)?;
                assign.push(ChartAssignment { target_chart: table_c[g][h], map });
            }
            ChartMap::new(&cp.complex, &x1c, assign, ld, vec![None; cp.charts.len()])
        }, inv, e)
    }

    /// The induced groupoid on a cover of the object space by full-dimensional
    /// patches (per parent chart). Comes with the refinement functor to the
    /// parent and a transported partition of unity when the parent has one.
    pub fn refine_by_cover(
        parent: &Groupoid,
        patches_per_chart: Vec<Vec<Polytope>>,
    ) -> Result<(Groupoid, functor::GroupoidFunctor)> {
        let dim = parent.dim();
        if patches_per_chart.len() != parent.x0.len() {
            return Err(Error::Validation("one patch list per object chart".into()));
        }
        // New object charts with back-references.
        let mut new_charts = Vec::new();
        let mut patch_parent = Vec::new(); // (parent chart, patch polytope)
        for (ci, patches) in patches_per_chart.iter().enumerate() {
            if !Polytope::union_covers(&parent.x0.charts[ci], patches)? {
                return Err(Error::Validation(format!("patches do not cover chart {ci}")));
            }
            for p in patches {
                if !p.is_full_dim() {
                    return Err(Error::Validation("lower-dimensional patch".into()));
                }
                if !parent.x0.charts[ci].contains_polytope(p) {
                    return Err(Error::Validation("patch leaves its chart".into()));
                }
                patch_parent.push(ci);
                new_charts.push(p.clone());
            }
        }
        let x0 = ChartComplex::new(dim, new_charts.clone())?;
        let r0_assign: Vec<ChartAssignment> = patch_parent
            .iter()
            .map(|&ci| ChartAssignment { target_chart: ci, map: AffineMap::identity(dim) })
            .collect();
        // Arrow charts: one per (parent arrow chart, source patch, target patch).
        let mut x1_charts = Vec::new();
        let mut arrow_data = Vec::new(); // (parent arrow, src patch idx, tgt patch idx)
        for (ai, achart) in parent.x1.charts.iter().enumerate() {
            let sa = &parent.s.assignments[ai];
            let ta = &parent.t.assignments[ai];
            for (pi, _) in new_charts.iter().enumerate() {
                if patch_parent[pi] != sa.target_chart {
                    continue;
                }
                for (qi, _) in new_charts.iter().enumerate() {
                    if patch_parent[qi] != ta.target_chart {
                        continue;
                    }
                    let cut = new_charts[pi]
                        .affine_preimage(&sa.map, achart)?
                        .intersect(&new_charts[qi].affine_preimage(&ta.map, achart)?)?;
                    if !cut.is_full_dim() {
                        continue;
                    }
                    x1_charts.push(cut);
                    arrow_data.push((ai, pi, qi));
                }
            }
        }
        let x1 = ChartComplex::new(dim, x1_charts)?;
        let ld = MapFlags { local_diffeo: true, proper: true, ..Default::default() };
        let s_assign: Vec<ChartAssignment> = arrow_data
            .iter()
            .map(|&(ai, pi, _)| ChartAssignment {
                target_chart: pi,
                map: parent.s.assignments[ai].map.clone(),
            })
            .collect();
        let t_assign: Vec<ChartAssignment> = arrow_data
            .iter()
            .map(|&(ai, _, qi)| ChartAssignment {
                target_chart: qi,
                map: parent.t.assignments[ai].map.clone(),
            })
            .collect();
        let s = ChartMap::new(&x1, &x0, s_assign, ld, vec![None; x1.len()])?;
        let t = ChartMap::new(&x1, &x0, t_assign, ld, vec![None; x1.len()])?;
        let r1_assign: Vec<ChartAssignment> = arrow_data
            .iter()
            .map(|&(ai, _, _)| ChartAssignment {
                target_chart: ai,
                map: AffineMap::identity(dim),
            })
            .collect();
        // Identity arrows of patches: the parent identity restricted.
        let mut e_assign = Vec::with_capacity(x0.len());
        for (pi, _) in new_charts.iter().enumerate() {
            let parent_chart = patch_parent[pi];
            let pe = &parent.e.assignments[parent_chart];
            let found = arrow_data
                .iter()
                .position(|&(ai, p, q)| ai == pe.target_chart && p == pi && q == pi)
                .ok_or_else(|| Error::Geometry("missing identity arrow chart".into()))?;
            e_assign.push(ChartAssignment { target_chart: found, map: pe.map.clone() });
        }
        let e = ChartMap::new(&x0, &x1, e_assign, ld, vec![None; x0.len()])?;
        let mut inv_assign = Vec::with_capacity(x1.len());
        for &(ai, pi, qi) in &arrow_data {
            let pinv = &parent.inv.assignments[ai];
            let found = arrow_data
                .iter()
                .position(|&(aj, p, q)| aj == pinv.target_chart && p == qi && q == pi)
                .ok_or_else(|| Error::Geometry("missing inverse arrow chart".into()))?;
            inv_assign.push(ChartAssignment { target_chart: found, map: pinv.map.clone() });
        }
        let inv = ChartMap::new(&x1, &x1, inv_assign, ld, vec![None; x1.len()])?;
        let x1c = x1.clone();
        let arrow_data_c = arrow_data.clone();
        let parent_cp = parent.composable.clone();
        let parent_m = parent.m.clone();
        let refined = Groupoid::assemble(x0.clone(), x1, s, t, move |cp| {
            let mut assign = Vec::with_capacity(cp.charts.len());
            for fc in &cp.charts {
                let (ai, _, qi) = arrow_data_c[fc.m_chart];
                let (bj, pj, qj) = arrow_data_c[fc.p_chart];
                debug_assert_eq!(arrow_data_c[fc.m_chart].1, qj);
                // Parent composable chart for the arrow pair (ai, bj).
                let Some((pidx, pchart)) = parent_cp
                    .charts
                    .iter()
                    .enumerate()
                    .find(|(_, c)| c.m_chart == ai && c.p_chart == bj)
                else {
                    return Err(Error::Geometry("missing parent composable chart".into()));
                };
                let pm = &parent_m.assignments[pidx];
                // Graph coordinates here and upstairs are both a-coordinates.
                let map = pm.map.compose(&pchart.to_m.inverse()?.compose(&fc.to_m)?)?;
                let target = arrow_data_c
                    .iter()
                    .position(|&(aj, p, q)| aj == pm.target_chart && p == pj && q == qi)
                    .ok_or_else(|| Error::Geometry("missing refined composition chart".into()))?;
                assign.push(ChartAssignment { target_chart: target, map });
            }
            ChartMap::new(&cp.complex, &x1c, assign, ld, vec![None; cp.charts.len()])
        }, inv, e)?;
        let r0 = ChartMap::new(
            &refined.x0,
            &parent.x0,
            r0_assign,
            MapFlags { local_diffeo: true, strongly_smooth: true, proper: true, ..Default::default() },
            vec![None; refined.x0.len()],
        )?;
        let r1 = ChartMap::new(
            &refined.x1,
            &parent.x1,
            r1_assign,
            MapFlags { local_diffeo: true, strongly_smooth: true, proper: true, ..Default::default() },
            vec![None; refined.x1.len()],
        )?;
        let functor = functor::GroupoidFunctor {
            f0: r0,
            f1: r1,
            proper: true,
            submersion: true,
        };
        let mut refined = refined;
        refined.partition_hint =
            refinement_partition_hint(parent, &refined, &functor, &patches_per_chart).ok();
        Ok((refined, functor))
    }

    /// Validation report: structure-map flags, groupoid identities, unit and
    /// inverse laws, associativity; all as exact chart-map equalities.
    pub fn validate(&self) -> SuiteOutcome {
        let mut out = SuiteOutcome::new("groupoid_valid");
        match self.validate_inner(&mut out) {
            Ok(()) => {}
            Err(e) => out.push(Check::fail("construction", e.to_string())),
        }
        out
    }

    fn validate_inner(&self, out: &mut SuiteOutcome) -> Result<()> {
        out.push(Check::of(
            "source and target are chart-wise invertible",
            self.s.flags.local_diffeo
                && self.t.flags.local_diffeo
                && self.s.assignments.iter().all(|a| a.map.is_invertible())
                && self.t.assignments.iter().all(|a| a.map.is_invertible()),
            "s or t fails invertibility",
        ));
        // Properness of s x t: automatic, all charts are compact polytopes.
        out.push(Check::pass("properness (compact charts)"));
        let id0 = ChartMap::identity(&self.x0);
        let id1 = ChartMap::identity(&self.x1);
        out.push(eq_check("s . e = id", &self.s.compose(&self.e)?, &id0));
        out.push(eq_check("t . e = id", &self.t.compose(&self.e)?, &id0));
        out.push(eq_check("s . i = t", &self.s.compose(&self.inv)?, &self.t));
        out.push(eq_check("t . i = s", &self.t.compose(&self.inv)?, &self.s));
        out.push(eq_check("i . i = id", &self.inv.compose(&self.inv)?, &id1));
        // Source and target of composites.
        let cp = &self.composable;
        out.push(eq_check(
            "s(m(a,b)) = s(b)",
            &self.s.compose(&self.m)?,
            &self.s.compose(&cp.proj_p)?,
        ));
        out.push(eq_check(
            "t(m(a,b)) = t(a)",
            &self.t.compose(&self.m)?,
            &self.t.compose(&cp.proj_m)?,
        ));
        // Unit laws.
        let pair_a_es = cp.map_into(&self.x1, &id1, &self.e.compose(&self.s)?)?;
        out.push(eq_check("m(a, e(s(a))) = a", &self.m.compose(&pair_a_es)?, &id1));
        let pair_et_a = cp.map_into(&self.x1, &self.e.compose(&self.t)?, &id1)?;
        out.push(eq_check("m(e(t(a)), a) = a", &self.m.compose(&pair_et_a)?, &id1));
        // Inverse laws.
        let pair_a_ia = cp.map_into(&self.x1, &id1, &self.inv)?;
        out.push(eq_check(
            "m(a, i(a)) = e(t(a))",
            &self.m.compose(&pair_a_ia)?,
            &self.e.compose(&self.t)?,
        ));
        let pair_ia_a = cp.map_into(&self.x1, &self.inv, &id1)?;
        out.push(eq_check(
            "m(i(a), a) = e(s(a))",
            &self.m.compose(&pair_ia_a)?,
            &self.e.compose(&self.s)?,
        ));
        // Associativity on triple composables.
        let triple = fiber_product(
            &cp.complex,
            &self.s.compose(&cp.proj_p)?,
            &self.x1,
            &self.t,
            &self.x0,
        )?;
        let ab = triple.proj_m.clone(); // -> composable pairs
        let c = triple.proj_p.clone(); // -> x1
        let a = cp.proj_m.compose(&ab)?;
        let b = cp.proj_p.compose(&ab)?;
        let m_ab = self.m.compose(&ab)?;
        let lhs = self.m.compose(&cp.map_into(&triple.complex, &m_ab, &c)?)?;
        let bc = cp.map_into(&triple.complex, &b, &c)?;
        let m_bc = self.m.compose(&bc)?;
        let rhs = self.m.compose(&cp.map_into(&triple.complex, &a, &m_bc)?)?;
        out.push(eq_check("m(m(a,b),c) = m(a,m(b,c))", &lhs, &rhs));
        Ok(())
    }

    /// Validate a pair of orientations making the groupoid oriented: source
    /// and target must be orientation preserving.
    pub fn validate_orientation(&self, o0: &Orientation, o1: &Orientation) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new("groupoid_orientation");
        let cs = RelOrientation::canonical(&self.s)?;
        let ct = RelOrientation::canonical(&self.t)?;
        for (c, a) in self.s.assignments.iter().enumerate() {
            out.push(Check::of(
                format!("s orientation preserving on arrow chart {c}"),
                cs.0[c] * o1.0[c] == o0.0[a.target_chart],
                "source map reverses orientation",
            ));
        }
        for (c, a) in self.t.assignments.iter().enumerate() {
            out.push(Check::of(
                format!("t orientation preserving on arrow chart {c}"),
                ct.0[c] * o1.0[c] == o0.0[a.target_chart],
                "target map reverses orientation",
            ));
        }
        Ok(out)
    }
}

/// Subordinate-cover partition transported through a refinement: the blend
/// functions of the patch covers multiplied by the pulled-back parent
/// partition.
fn refinement_partition_hint(
    parent: &Groupoid,
    refined: &Groupoid,
    functor: &functor::GroupoidFunctor,
    patches_per_chart: &[Vec<Polytope>],
) -> Result<PPForm> {
    use std::collections::BTreeMap;
    let mut cells: Vec<Vec<crate::forms::Cell>> = Vec::new();
    for patches in patches_per_chart {
        if patches.len() == 1 {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(vec![], crate::poly::Poly::one(refined.dim()));
            cells.push(vec![crate::forms::Cell { polytope: patches[0].clone(), coeffs }]);
        } else if refined.dim() == 1 {
            cells.extend(crate::epg::averaging::interval_chain_partition(patches)?);
        } else {
            return Err(Error::Partition("no blend construction for this cover".into()));
        }
    }
    let u = PPForm::validated(&refined.x0, 0, cells, Some(1))?;
    let parent_rho = crate::epg::averaging::find_partition(parent)?;
    let pulled = parent_rho.pullback(&refined.x0, &parent.x0, &functor.f0)?;
    u.wedge(&refined.x0, &pulled)
}

/// Structure maps of an étale groupoid are chart-wise invertible; verify and
/// record that on the flags.
fn as_local_diffeo(mut map: ChartMap, role: &str) -> Result<ChartMap> {
    for (i, a) in map.assignments.iter().enumerate() {
        if !a.map.is_invertible() {
            return Err(Error::Validation(format!(
                "{role} map is not invertible on chart {i}"
            )));
        }
    }
    map.flags.local_diffeo = true;
    map.flags.proper = true;
    Ok(map)
}

/// Chart maps compared as maps: same chart assignment and affine data.
pub fn chart_maps_equal(a: &ChartMap, b: &ChartMap) -> bool {
    a.assignments == b.assignments
}

fn eq_check(name: &str, a: &ChartMap, b: &ChartMap) -> Check {
    if chart_maps_equal(a, b) {
        Check::pass(name)
    } else {
        let detail = a
            .assignments
            .iter()
            .zip(&b.assignments)
            .enumerate()
            .find(|(_, (x, y))| x != y)
            .map(|(i, _)| format!("first mismatch on chart {i}"))
            .unwrap_or_else(|| "assignment arity mismatch".into());
        Check::fail(name, detail)
    }
}

/// The mirror groupoid: Z/2 acting on [-1, 1] by x -> -x.
pub fn mirror_interval() -> Result<Groupoid> {
    let base = ChartComplex::single(Polytope::interval(-1, 1))?;
    let refl = AffineMap::new(
        crate::linalg::Mat::from_rows(vec![vec![-Rat::one()]]),
        vec![Rat::zero()],
    );
    Groupoid::action(base, vec![AffineMap::identity(1), refl], vec![vec![0, 1], vec![1, 0]])
}

/// Z/2 x Z/2 acting on the square [-1,1]^2 by coordinate reflections.
pub fn klein_square() -> Result<Groupoid> {
    let lo = vec![-Rat::one(), -Rat::one()];
    let hi = vec![Rat::one(), Rat::one()];
    let base = ChartComplex::single(Polytope::box_(&lo, &hi)?)?;
    let diag = |a: i64, b: i64| {
        AffineMap::new(
            crate::linalg::Mat::from_rows(vec![
                vec![Rat::from_int(a), Rat::zero()],
                vec![Rat::zero(), Rat::from_int(b)],
            ]),
            vec![Rat::zero(), Rat::zero()],
        )
    };
    let maps = vec![diag(1, 1), diag(-1, 1), diag(1, -1), diag(-1, -1)];
    let table = vec![
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ];
    Groupoid::action(base, maps, table)
}
