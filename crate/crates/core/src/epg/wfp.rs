//! The explicit weak fiber product of groupoid functors: three-factor object
//! and arrow spaces built from nested two-factor fiber products, with
//! structure maps assembled through the graph-coordinate reconstruction maps
//! and the pull-back orientation recipe for the projections.

use super::functor::{GroupoidFunctor, NaturalTransformation};
use super::Groupoid;
use crate::chart::ChartMap;
use crate::error::Result;
use crate::fiberprod::{fiber_product, FiberProduct};
use crate::orient::RelOrientation;

pub struct WeakFiberProduct {
    pub groupoid: Groupoid,
    /// Projection functor to the source of the first leg.
    pub a1: GroupoidFunctor,
    /// Projection functor to the source of the second leg.
    pub a2: GroupoidFunctor,
    /// The comparison 2-morphism G . A2 => F . A1 (objects to arrows of Z).
    pub alpha: NaturalTransformation,
    // Inner fiber products, kept for the orientation recipes.
    w0: FiberProduct,
    v0: FiberProduct,
    p0: FiberProduct,
    w1: FiberProduct,
    v1: FiberProduct,
    p1: FiberProduct,
}

/// Build the weak fiber product of `F : X -> Z` and `G : Y -> Z`.
pub fn weak_fiber_product(
    x: &Groupoid,
    y: &Groupoid,
    z: &Groupoid,
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
) -> Result<WeakFiberProduct> {
    // Level 0: objects {(x, z, y) : F0(x) = s(z), t(z) = G0(y)}.
    let w0 = fiber_product(&x.x0, &f.f0, &z.x1, &z.s, &z.x0)?;
    let s0 = w0.proj_p.clone(); // W0 -> Z1
    let v0 = fiber_product(&z.x1, &z.t, &y.x0, &g.f0, &z.x0)?;
    let t0 = v0.proj_m.clone(); // V0 -> Z1
    let p0 = fiber_product(&w0.complex, &s0, &v0.complex, &t0, &z.x1)?;
    let pi_x0 =
        crate::mwc::compose_through_invertible(&p0.complex, &x.x0, &p0.proj_m, &w0.proj_m)?;
    let pi_z0 = s0.compose(&p0.proj_m)?;
    let pi_y0 =
        crate::mwc::compose_through_invertible(&p0.complex, &y.x0, &p0.proj_p, &v0.proj_p)?;

    // Level 1: arrows {(a, z, b) : F0(s(a)) = s(z), t(z) = G0(s(b))}.
    let sf1 = crate::mwc::compose_through_invertible(&x.x1, &z.x0, &f.f1, &z.s)?;
    let sg1 = crate::mwc::compose_through_invertible(&y.x1, &z.x0, &g.f1, &z.s)?;
    let w1 = fiber_product(&x.x1, &sf1, &z.x1, &z.s, &z.x0)?;
    let s1 = w1.proj_p.clone();
    let v1 = fiber_product(&z.x1, &z.t, &y.x1, &sg1, &z.x0)?;
    let t1 = v1.proj_m.clone();
    let p1 = fiber_product(&w1.complex, &s1, &v1.complex, &t1, &z.x1)?;
    let pi_x1 =
        crate::mwc::compose_through_invertible(&p1.complex, &x.x1, &p1.proj_m, &w1.proj_m)?;
    let pi_z1 = s1.compose(&p1.proj_m)?;
    let pi_y1 =
        crate::mwc::compose_through_invertible(&p1.complex, &y.x1, &p1.proj_p, &v1.proj_p)?;

    // Induced map into the object space from compatible components.
    let into_p0 = |src: &crate::chart::ChartComplex,
                   cx: &ChartMap,
                   cz: &ChartMap,
                   cy: &ChartMap|
     -> Result<ChartMap> {
        let into_w = w0.map_into(src, cx, cz)?;
        let into_v = v0.map_into(src, cz, cy)?;
        p0.map_into(src, &into_w, &into_v)
    };
    let into_p1 = |src: &crate::chart::ChartComplex,
                   cx: &ChartMap,
                   cz: &ChartMap,
                   cy: &ChartMap|
     -> Result<ChartMap> {
        let into_w = w1.map_into(src, cx, cz)?;
        let into_v = v1.map_into(src, cz, cy)?;
        p1.map_into(src, &into_w, &into_v)
    };

    let p1c = p1.complex.clone();
    // Source and target of a triple arrow (a, z, b).
    let sp = into_p0(
        &p1c,
        &x.s.compose(&pi_x1)?,
        &pi_z1,
        &y.s.compose(&pi_y1)?,
    )?;
    // z2 = m(m(G1(b), z), i(F1(a))).
    let g1b = g.f1.compose(&pi_y1)?;
    let first = z.m.compose(&z.composable.map_into(&p1c, &g1b, &pi_z1)?)?;
    let if1a = z.inv.compose(&f.f1.compose(&pi_x1)?)?;
    let z2 = z.m.compose(&z.composable.map_into(&p1c, &first, &if1a)?)?;
    let tp = into_p0(
        &p1c,
        &x.t.compose(&pi_x1)?,
        &z2,
        &y.t.compose(&pi_y1)?,
    )?;
    // Identities, inverses.
    let ep = into_p1(
        &p0.complex,
        &x.e.compose(&pi_x0)?,
        &pi_z0,
        &y.e.compose(&pi_y0)?,
    )?;
    let ip = into_p1(
        &p1c,
        &x.inv.compose(&pi_x1)?,
        &z2,
        &y.inv.compose(&pi_y1)?,
    )?;

    let x_cp = x.composable.clone();
    let y_cp = y.composable.clone();
    let x_m = x.m.clone();
    let y_m = y.m.clone();
    let pi_x1_c = pi_x1.clone();
    let pi_y1_c = pi_y1.clone();
    let pi_z1_c = pi_z1.clone();
    let w1_c = w1.clone();
    let v1_c = v1.clone();
    let p1_m = p1.clone();
    let groupoid = Groupoid::assemble(
        p0.complex.clone(),
        p1c.clone(),
        sp,
        tp,
        move |cp| {
            // m((a, z, b), (a', z', b')) = (m(a, a'), z', m(b, b')).
            let pr_g = cp.proj_m.clone();
            let pr_f = cp.proj_p.clone();
            let ma = x_m.compose(&x_cp.map_into(
                &cp.complex,
                &pi_x1_c.compose(&pr_g)?,
                &pi_x1_c.compose(&pr_f)?,
            )?)?;
            let mb = y_m.compose(&y_cp.map_into(
                &cp.complex,
                &pi_y1_c.compose(&pr_g)?,
                &pi_y1_c.compose(&pr_f)?,
            )?)?;
            let zf = pi_z1_c.compose(&pr_f)?;
            let into_w = w1_c.map_into(&cp.complex, &ma, &zf)?;
            let into_v = v1_c.map_into(&cp.complex, &zf, &mb)?;
            p1_m.map_into(&cp.complex, &into_w, &into_v)
        },
        ip,
        ep,
    )?;

    let a1 = GroupoidFunctor {
        f0: pi_x0,
        f1: pi_x1,
        proper: true,
        submersion: g.submersion,
    };
    let a2 = GroupoidFunctor {
        f0: pi_y0,
        f1: pi_y1,
        proper: true,
        submersion: f.submersion,
    };
    let alpha = NaturalTransformation {
        alpha: z.inv.compose(&s0.compose(&groupoid_projection_w(&groupoid, &p0)?)?)?,
        o_alpha: None,
    };
    Ok(WeakFiberProduct {
        groupoid,
        a1,
        a2,
        alpha,
        w0,
        v0,
        p0,
        w1,
        v1,
        p1,
    })
}

fn groupoid_projection_w(g: &Groupoid, p0: &FiberProduct) -> Result<ChartMap> {
    let _ = g;
    Ok(p0.proj_m.clone())
}

impl WeakFiberProduct {
    /// The pull-back relative orientation of the first projection induced by
    /// a relative orientation of the second leg: composite of the canonical
    /// orientation of the bottom square projection with the pulled-back
    /// orientation through the two Cartesian squares.
    pub fn pullback_orientation(
        &self,
        z: &Groupoid,
        g: &GroupoidFunctor,
        o_g0: &RelOrientation,
        o_g1: &RelOrientation,
    ) -> Result<(RelOrientation, RelOrientation)> {
        let o_t0 = self.v0.pullback_rel_orientation(&z.t, &g.f0, o_g0)?;
        let o_c1_0 = self.p0.pullback_rel_orientation(
            &self.w0.proj_p,
            &self.v0.proj_m,
            &o_t0,
        )?;
        let o_c2_0 = RelOrientation::canonical(&self.w0.proj_m)?;
        let o_a10 = RelOrientation::compose(&o_c2_0, &o_c1_0, &self.p0.proj_m);

        let sg1 = z.s.compose(&g.f1)?;
        let o_sg1 = RelOrientation::compose(&RelOrientation::canonical(&z.s)?, o_g1, &g.f1);
        let o_t1 = self.v1.pullback_rel_orientation(&z.t, &sg1, &o_sg1)?;
        let o_c1_1 = self.p1.pullback_rel_orientation(
            &self.w1.proj_p,
            &self.v1.proj_m,
            &o_t1,
        )?;
        let o_c2_1 = RelOrientation::canonical(&self.w1.proj_m)?;
        let o_a11 = RelOrientation::compose(&o_c2_1, &o_c1_1, &self.p1.proj_m);
        Ok((o_a10, o_a11))
    }

    /// The transpose pull-back relative orientation of the second projection
    /// induced by a relative orientation of the first leg (mirrored recipe).
    pub fn transpose_pullback_orientation(
        &self,
        z: &Groupoid,
        f: &GroupoidFunctor,
        o_f0: &RelOrientation,
        o_f1: &RelOrientation,
    ) -> Result<(RelOrientation, RelOrientation)> {
        let o_s0 = self.w0.transpose_pullback_rel_orientation(&f.f0, &z.s, o_f0)?;
        let o_b1_0 = self.p0.transpose_pullback_rel_orientation(
            &self.w0.proj_p,
            &self.v0.proj_m,
            &o_s0,
        )?;
        let o_b2_0 = RelOrientation::canonical(&self.v0.proj_p)?;
        let o_a20 = RelOrientation::compose(&o_b2_0, &o_b1_0, &self.p0.proj_p);

        let sf1 = z.s.compose(&f.f1)?;
        let o_sf1 = RelOrientation::compose(&RelOrientation::canonical(&z.s)?, o_f1, &f.f1);
        let o_s1 = self.w1.transpose_pullback_rel_orientation(&sf1, &z.s, &o_s1_input(&o_sf1))?;
        let o_b1_1 = self.p1.transpose_pullback_rel_orientation(
            &self.w1.proj_p,
            &self.v1.proj_m,
            &o_s1,
        )?;
        let o_b2_1 = RelOrientation::canonical(&self.v1.proj_p)?;
        let o_a21 = RelOrientation::compose(&o_b2_1, &o_b1_1, &self.p1.proj_p);
        Ok((o_a20, o_a21))
    }
}

fn o_s1_input(o: &RelOrientation) -> RelOrientation {
    o.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epg::averaging;
    use crate::epg::mirror_interval;
    use crate::rat::Rat;

    #[test]
    fn wfp_of_identity_legs_on_mirror() {
        let g = mirror_interval().unwrap();
        let idf = GroupoidFunctor::identity(&g);
        let wfp = weak_fiber_product(&g, &g, &g, &idf, &idf).unwrap();
        // Objects: {(x, z, y) : x = s(z), t(z) = y} -- one chart per arrow
        // chart of the mirror groupoid.
        assert_eq!(wfp.groupoid.x0.len(), g.x1.len());
        let report = wfp.groupoid.validate();
        assert!(report.passed(), "{:?}", report.first_failure());
        let a1_ok = wfp.a1.validate(&wfp.groupoid, &g).unwrap();
        assert!(a1_ok.passed(), "{:?}", a1_ok.first_failure());
        let a2_ok = wfp.a2.validate(&wfp.groupoid, &g).unwrap();
        assert!(a2_ok.passed(), "{:?}", a2_ok.first_failure());
        let nat = wfp.alpha.validate(&wfp.groupoid, &g, &wfp.a2, &wfp.a1).unwrap();
        assert!(nat.passed(), "{:?}", nat.first_failure());
    }

    #[test]
    fn wfp_partition_product() {
        let g = mirror_interval().unwrap();
        let idf = GroupoidFunctor::identity(&g);
        let wfp = weak_fiber_product(&g, &g, &g, &idf, &idf).unwrap();
        let rho_x = averaging::find_partition(&g).unwrap();
        let rho = averaging::k_map(
            &wfp.groupoid,
            &super::super::functor::functor_pullback(&wfp.groupoid, &g, &wfp.a1, &rho_x).unwrap(),
            &super::super::functor::functor_pullback(&wfp.groupoid, &g, &wfp.a2, &rho_x).unwrap(),
        )
        .unwrap();
        assert!(averaging::is_partition(&wfp.groupoid, &rho).unwrap());
        // Arrow counts multiply: 2 * 2 = 4 arrows into each object.
        let count = averaging::arrow_count(&wfp.groupoid).unwrap();
        assert!(count
            .equals(
                &wfp.groupoid.x0,
                &crate::forms::PPForm::constant(&wfp.groupoid.x0, Rat::from_int(4))
            )
            .unwrap());
    }
}
