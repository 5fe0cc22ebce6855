use unital_forge::cli::{execute, Cli};
use clap::Parser;

fn canonical(args: &[&str]) -> String {
    let cli = Cli::try_parse_from(std::iter::once("unital-forge").chain(args.iter().copied())).unwrap();
    execute(&cli).unwrap().canonical()
}

#[test]
fn all_at_q3_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let base = canonical(&["experiments", "all", "--q", "3", "--threads", "1"]);
    for t in ["4", "8"] {
        assert_eq!(base, canonical(&["experiments", "all", "--q", "3", "--threads", t]), "threads {t}");
    }
    assert_eq!(base, canonical(&["experiments", "all", "--q", "3", "--threads", "4", "--cache", cache]));
    assert_eq!(base, canonical(&["experiments", "all", "--q", "3", "--threads", "8", "--cache", cache]));
}
