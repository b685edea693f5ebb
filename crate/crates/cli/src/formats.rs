//! Text formats: `.perm` permutations, `.circ` circuits and an OpenQASM 3 subset.
//!
//! ```text
//! # point x encodes lines 1..n as bits x_1..x_n, x_1 least significant
//! n=4
//! cycles: (0 9)(6 15)
//! ```
//!
//! ```text
//! lines=4
//! cx 1 4
//! ccx 3 4 1
//! ```

use std::fmt::Write as _;

use revsynth::{Circuit, Cycle, Gate, GateClass, Permutation, Point};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &'static str,
) -> Result<u32, FormatError> {
    let (no, first) = lines.next().ok_or(FormatError::MissingHeader(key))?;
    let value = first
        .strip_prefix(key)
        .and_then(|rest| rest.trim_start().strip_prefix('='))
        .ok_or(FormatError::MissingHeader(key))?;
    value
        .trim()
        .parse()
        .map_err(|_| syntax(no, format!("`{key}` needs a non-negative integer")))
}

fn parse_point(no: usize, tok: &str) -> Result<Point, FormatError> {
    tok.parse()
        .map_err(|_| syntax(no, format!("`{tok}` is not a point")))
}

fn parse_cycles(no: usize, text: &str) -> Result<Vec<Cycle>, FormatError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| syntax(no, "expected `(`"))?;
        let end = body.find(')').ok_or_else(|| syntax(no, "unclosed `(`"))?;
        let points: Vec<Point> = body[..end]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| parse_point(no, t))
            .collect::<Result<_, _>>()?;
        // `()` stands for the identity.
        if !points.is_empty() {
            cycles.push(Cycle::new(points).map_err(|e| syntax(no, e.to_string()))?);
        }
        rest = body[end + 1..].trim_start();
    }
    Ok(cycles)
}

pub fn parse_perm(text: &str) -> Result<Permutation, FormatError> {
    let mut lines = content_lines(text);
    let n = header(&mut lines, "n")?;
    let invalid = |e: revsynth::PermError| FormatError::Invalid(e.to_string());
    let (no, kind) = lines
        .next()
        .ok_or_else(|| FormatError::Invalid("expected `cycles:` or `table:`".into()))?;
    if let Some(first) = kind.strip_prefix("cycles:") {
        let mut cycles = parse_cycles(no, first)?;
        for (no, line) in lines {
            cycles.extend(parse_cycles(no, line)?);
        }
        Permutation::from_cycles(n, &cycles).map_err(invalid)
    } else if kind
        .strip_prefix("table:")
        .is_some_and(|r| r.trim().is_empty())
    {
        Permutation::identity(n).map_err(invalid)?;
        let size = 1usize << n;
        let mut image: Vec<Option<Point>> = vec![None; size];
        for (no, line) in lines {
            let mut toks = line.split_whitespace();
            let (Some(src), Some(dst), None) = (toks.next(), toks.next(), toks.next()) else {
                return Err(syntax(no, "expected `<src> <dst>`"));
            };
            let (src, dst) = (parse_point(no, src)?, parse_point(no, dst)?);
            let slot = image
                .get_mut(src as usize)
                .ok_or_else(|| syntax(no, format!("point {src} is out of range for n={n}")))?;
            if slot.replace(dst).is_some() {
                return Err(syntax(no, format!("point {src} listed twice")));
            }
        }
        let image: Vec<Point> = image
            .into_iter()
            .enumerate()
            .map(|(x, y)| {
                y.ok_or_else(|| FormatError::Invalid(format!("table has no entry for {x}")))
            })
            .collect::<Result<_, _>>()?;
        Permutation::from_image(n, image).map_err(invalid)
    } else {
        Err(syntax(no, "expected `cycles:` or `table:`"))
    }
}

const PERM_HEADER: &str = "# point x encodes lines 1..n as bits x_1..x_n, x_1 least significant\n";

/// Writes `p` in cycle form.
pub fn write_perm(p: &Permutation) -> String {
    let mut out = format!("{PERM_HEADER}n={}\ncycles:", p.n());
    let cycles = p.cycles();
    if cycles.is_empty() {
        out.push_str(" ()");
    } else {
        out.push(' ');
        for c in &cycles {
            write!(out, "{c}").unwrap();
        }
    }
    out.push('\n');
    out
}

/// Writes `p` as a full table.
pub fn write_perm_table(p: &Permutation) -> String {
    let mut out = format!("{PERM_HEADER}n={}\ntable:\n", p.n());
    for (x, y) in p.image().iter().enumerate() {
        writeln!(out, "{x} {y}").unwrap();
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    let mut lines = content_lines(text);
    let n = header(&mut lines, "lines")?;
    let mut c = Circuit::new(n).map_err(|e| FormatError::Invalid(e.to_string()))?;
    for (no, line) in lines {
        let mut toks = line.split_whitespace();
        let op = toks.next().unwrap_or_default();
        let args: Vec<u32> = toks
            .map(|t| {
                t.parse()
                    .map_err(|_| syntax(no, format!("`{t}` is not a line index")))
            })
            .collect::<Result<_, _>>()?;
        let controls = match op {
            "x" => 0,
            "cx" => 1,
            "ccx" => 2,
            _ if op.ends_with("cx") && op[..op.len() - 1].chars().all(|ch| ch == 'c') => {
                return Err(syntax(
                    no,
                    "gates with three or more controls are not supported",
                ));
            }
            _ => return Err(syntax(no, format!("unknown gate `{op}`"))),
        };
        if args.len() != controls + 1 {
            return Err(syntax(
                no,
                format!("`{op}` takes {} line indices", controls + 1),
            ));
        }
        let gate = Gate::new(args[..controls].iter().copied(), args[controls])
            .map_err(|e| syntax(no, e.to_string()))?;
        c.push(gate).map_err(|e| syntax(no, e.to_string()))?;
    }
    Ok(c)
}

fn gate_name(g: &Gate) -> Result<&'static str, FormatError> {
    match g.class() {
        GateClass::Not => Ok("x"),
        GateClass::Cnot => Ok("cx"),
        GateClass::Toffoli => Ok("ccx"),
        GateClass::MultiControl(_) => Err(FormatError::Invalid(format!(
            "{g} has more than two controls"
        ))),
    }
}

pub fn write_circuit(c: &Circuit) -> Result<String, FormatError> {
    let mut out = format!("lines={}\n", c.n());
    for g in c.gates() {
        write!(out, "{}", gate_name(g)?).unwrap();
        for line in g.controls().chain([g.target()]) {
            write!(out, " {line}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// OpenQASM 3 with line i on qubit q[i−1].
pub fn write_qasm(c: &Circuit) -> Result<String, FormatError> {
    let mut out = format!(
        "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqreg q[{}];\n",
        c.n()
    );
    for g in c.gates() {
        let operands: Vec<String> = g
            .controls()
            .chain([g.target()])
            .map(|l| format!("q[{}]", l - 1))
            .collect();
        writeln!(out, "{} {};", gate_name(g)?, operands.join(", ")).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pairs_perm() {
        let p = parse_perm("# two independent transpositions\nn=4\ncycles: (0 9)(6 15)\n").unwrap();
        assert_eq!(p.apply(9), 0);
        assert_eq!(p.apply(6), 15);
        assert_eq!(parse_perm(&write_perm(&p)).unwrap(), p);
        assert_eq!(parse_perm(&write_perm_table(&p)).unwrap(), p);
    }

    #[test]
    fn identity_forms() {
        let id = Permutation::identity(3).unwrap();
        assert_eq!(parse_perm("n=3\ncycles:\n").unwrap(), id);
        assert_eq!(parse_perm("n=3\ncycles: ()\n").unwrap(), id);
        assert_eq!(write_perm(&id), format!("{PERM_HEADER}n=3\ncycles: ()\n"));
    }

    #[test]
    fn perm_errors() {
        assert_eq!(
            parse_perm("cycles: (0 1)"),
            Err(FormatError::MissingHeader("n"))
        );
        assert!(parse_perm("n=2\ncycles: (0 4)").is_err());
        assert!(parse_perm("n=2\ncycles: (0 1").is_err());
        assert!(parse_perm("n=2\ncycles: (0 1)(1 2)").is_err());
        assert!(parse_perm("n=1\ntable:\n0 1\n").is_err());
        assert!(parse_perm("n=1\ntable:\n0 1\n0 1\n").is_err());
        assert!(parse_perm("n=1\ntable:\n0 0\n1 0\n").is_err());
        assert!(parse_perm("n=1\nimage: 1 0").is_err());
    }

    #[test]
    fn circuit_round_trip() {
        let text = "lines=4\n# comment\ncx 1 4\ncx 2 3\nx 1\nccx 3 4 1\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.gates()[3], Gate::toffoli(3, 4, 1));
        assert_eq!(write_circuit(&c).unwrap(), text.replace("# comment\n", ""));
    }

    #[test]
    fn circuit_errors() {
        assert!(matches!(
            parse_circuit("lines=5\ncccx 1 2 3 4"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(parse_circuit("lines=4\nccx 1 1 2").is_err());
        assert!(parse_circuit("lines=4\ncx 1 5").is_err());
        assert!(parse_circuit("lines=4\ncx 1").is_err());
        assert!(parse_circuit("lines=4\nh 1").is_err());
        assert!(parse_circuit("x 1").is_err());
    }

    #[test]
    fn qasm() {
        let c = Circuit::from_gates(3, [Gate::not(1), Gate::toffoli(1, 2, 3)]).unwrap();
        assert_eq!(
            write_qasm(&c).unwrap(),
            "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqreg q[3];\nx q[0];\nccx q[0], q[1], q[2];\n"
        );
    }
}
