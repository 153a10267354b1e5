use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerpath")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_longpath_and_oracle_on_a_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c.txt");
    let g = g.to_str().unwrap();
    assert!(run(&["gen", "cycle(7)", "--output", g]).status.success());
    let o = run(&["longpath", "--input", g, "--start", "2", "--seed", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("path=2,3,4,5,6,0,1"));
    assert!(stdout(&o).contains("length=6"));
    let o = run(&["oracle", "--input", g, "--kind", "path", "--start", "0"]);
    assert_eq!(stdout(&o).trim(), "6");
    let o = run(&["decompose", "--input", g]);
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = run(&["verify", "--input", g]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p.txt");
    std::fs::write(&g, "3 2\n0 1\n1 2\n").unwrap();
    let o = run(&["longpath", "--input", g.to_str().unwrap(), "--start", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["gen", "blowup(1)"]).status.code(), Some(2));
    assert_eq!(run(&["longpath", "--input", "/nonexistent", "--start", "0"]).status.code(), Some(2));
}

#[test]
fn experiment_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("e.cfg");
    std::fs::write(&cfg, "generator = cycle({4|8})\nseeds = 2\noracle = true\n").unwrap();
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    assert!(run(&["experiment", "--config", cfg.to_str().unwrap(), "--output", csv.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().starts_with("cycle,n=4,0,4,4,"));
    assert!(run(&["plot", "--input", csv.to_str().unwrap(), "--output", svg.to_str().unwrap()]).status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}
