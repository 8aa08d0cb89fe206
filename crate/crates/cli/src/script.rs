//! Simulation scripts: one command per line, `#` comments and blank lines
//! ignored.
//!
//! ```text
//! fail 4
//! repair 4 [1,2,3]
//! collect 1,2
//! eavesdrop 4
//! report
//! ```

use crate::Failure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Fail(usize),
    Repair(usize, Option<Vec<usize>>),
    Collect(Vec<usize>),
    Eavesdrop(usize),
    Report,
}

pub fn parse(text: &str) -> Result<Vec<Command>, Failure> {
    let mut commands = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Failure::Usage(format!("script line {}: {msg}", lineno + 1));
        let mut parts = line.split_whitespace();
        let verb = parts.next().expect("nonempty line");
        let rest: Vec<&str> = parts.collect();
        let one_node = |rest: &[&str], verb: &str| -> Result<usize, Failure> {
            match rest {
                [id] => id
                    .parse()
                    .map_err(|_| bad(&format!("{verb} expects a node id, got {id:?}"))),
                _ => Err(bad(&format!("{verb} expects exactly one node id"))),
            }
        };
        let command = match verb {
            "fail" => Command::Fail(one_node(&rest, "fail")?),
            "eavesdrop" => Command::Eavesdrop(one_node(&rest, "eavesdrop")?),
            "repair" => match rest.as_slice() {
                [id] => Command::Repair(
                    id.parse().map_err(|_| bad("repair expects a node id"))?,
                    None,
                ),
                [id, helpers] => Command::Repair(
                    id.parse().map_err(|_| bad("repair expects a node id"))?,
                    Some(parse_id_list(helpers).map_err(|m| bad(&m))?),
                ),
                _ => return Err(bad("repair expects a node id and optional helper list")),
            },
            "collect" => match rest.as_slice() {
                [ids] => Command::Collect(parse_id_list(ids).map_err(|m| bad(&m))?),
                _ => return Err(bad("collect expects a comma-separated node list")),
            },
            "report" => {
                if !rest.is_empty() {
                    return Err(bad("report takes no arguments"));
                }
                Command::Report
            }
            other => return Err(bad(&format!("unknown command {other:?}"))),
        };
        commands.push(command);
    }
    Ok(commands)
}

fn parse_id_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| format!("not a node id: {part:?}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_full_grammar() {
        let text = "# demo\n\nfail 4\nrepair 4\nrepair 2 1,3,4\ncollect 1,2\neavesdrop 4\nreport\n";
        let cmds = parse(text).unwrap();
        assert_eq!(
            cmds,
            vec![
                Command::Fail(4),
                Command::Repair(4, None),
                Command::Repair(2, Some(vec![1, 3, 4])),
                Command::Collect(vec![1, 2]),
                Command::Eavesdrop(4),
                Command::Report,
            ]
        );
        assert_eq!(parse("").unwrap(), vec![]);
    }

    #[test]
    fn rejects_malformed_lines() {
        for bad in ["fly 1", "fail", "fail x", "collect", "report 3", "repair"] {
            assert!(matches!(parse(bad), Err(Failure::Usage(_))), "{bad}");
        }
    }
}
