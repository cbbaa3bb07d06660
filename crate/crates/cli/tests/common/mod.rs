//! The golden corpus shared by the CLI tests and the acceptance run.

use std::path::{Path, PathBuf};

pub fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

/// Every subcommand against the corpus, with the exit code it must give.
pub const CASES: &[(&[&str], i32)] = &[
    (&["validate", "two.cat"], 0),
    (&["-f", "kan.cat", "kan-left", "K", "F"], 0),
    (&["-f", "kan.cat", "kan-right", "K", "F"], 0),
    (&["-f", "equalizer.cat", "limit", "X"], 0),
    (&["-f", "equalizer.cat", "colimit", "X"], 0),
    (&["-f", "equalizer.cat", "limit", "D"], 1),
    (&["-f", "meet.cat", "limit", "P"], 0),
    (&["-f", "meet.cat", "colimit", "P"], 0),
    (&["-f", "end.cat", "end", "H"], 0),
    (&["-f", "end.cat", "coend", "H"], 0),
    (&["-f", "adjoint.cat", "adjoint-of", "bang", "--side", "right"], 0),
    (&["-f", "adjoint.cat", "adjoint-of", "bang", "--side", "left"], 0),
    (&["-f", "adjoint.cat", "adjoint-of", "drop", "--side", "right"], 1),
    (&["-f", "snake.cat", "snake", "I", "I", "eta", "eps"], 0),
    (&["-f", "snake.cat", "snake", "I", "I", "eta", "epsBad"], 1),
    (&["-f", "yoneda.cat", "yoneda-check", "par"], 0),
    (&["-f", "density.cat", "density", "Id"], 0),
    (&["-f", "density.cat", "density", "K"], 1),
    (&["-f", "density.cat", "codensity", "K"], 0),
    (&["-f", "weighted.cat", "weighted-limit", "W", "X"], 0),
    (&["-f", "weighted.cat", "weighted-limit", "V", "X", "--colimit"], 0),
    (&["-f", "diagrams.cat", "diagram-eval", "side"], 0),
    (&["-f", "diagrams.cat", "diagram-normalize", "stacked", "slid"], 0),
    (&["-f", "diagrams.cat", "diagram-normalize", "lift | rise"], 0),
    (&["validate", "incomplete.cat"], 2),
    (&["validate", "syntax.cat"], 2),
    (&["validate", "broken_nat.cat"], 1),
    (&["-f", "two.cat", "limit", "nope"], 2),
    (&["-f", "two.cat", "frobnicate"], 2),
    (&["-f", "missing.cat", "validate"], 2),
    (&["-f", "equalizer.cat", "--guard", "0", "limit", "D"], 2),
];
