fn main() {
    eprintln!("scenario runner not wired up yet");
    std::process::exit(2);
}
