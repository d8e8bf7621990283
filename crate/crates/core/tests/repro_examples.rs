use modjet::par::Exec;
use modjet::repro::{run_example, EXAMPLES};

#[test]
fn every_bundled_example_passes() {
    for (id, _) in EXAMPLES {
        let r = run_example(id, 128, Exec::auto()).unwrap();
        for c in &r.checks {
            println!("{id:16} {:48} expected {:12} observed {}", c.name, c.expected, c.observed);
        }
        assert!(r.passed, "{id}");
    }
}
