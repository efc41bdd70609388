use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::PipelineError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskEntry {
    pub id: String,
    pub task: String,
    pub env: String,
}

/// Entries separated by `---` lines. Each has an `id:` line and `task:`
/// and `env:` blocks; a block runs until the next key.
pub fn parse_dataset(text: &str) -> Result<Vec<TaskEntry>, PipelineError> {
    let mut entries = Vec::new();
    let mut ids = BTreeSet::new();
    let mut chunk: Vec<(usize, &str)> = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    for (i, line) in lines.iter().enumerate() {
        if line.trim() == "---" {
            finish(&mut chunk, &mut entries, &mut ids)?;
        } else {
            chunk.push((i + 1, line));
        }
    }
    finish(&mut chunk, &mut entries, &mut ids)?;
    Ok(entries)
}

fn finish(
    chunk: &mut Vec<(usize, &str)>,
    entries: &mut Vec<TaskEntry>,
    ids: &mut BTreeSet<String>,
) -> Result<(), PipelineError> {
    let lines = std::mem::take(chunk);
    if lines
        .iter()
        .all(|(_, l)| l.trim().is_empty() || l.starts_with('#'))
    {
        return Ok(());
    }
    let first = lines[0].0;
    let mut fields: [Option<Vec<&str>>; 3] = [None, None, None];
    let mut current: Option<usize> = None;
    for (n, line) in lines {
        let key = ["id:", "task:", "env:"]
            .iter()
            .position(|k| line.starts_with(k));
        match key {
            Some(k) => {
                if fields[k].is_some() {
                    return Err(PipelineError::Dataset {
                        line: n,
                        message: format!("repeated key '{}'", &line[..line.find(':').unwrap()]),
                    });
                }
                let rest = line[line.find(':').unwrap() + 1..].trim();
                fields[k] = Some(if rest.is_empty() { vec![] } else { vec![rest] });
                current = Some(k);
            }
            None => match current {
                Some(k) => fields[k].as_mut().unwrap().push(line),
                None if line.trim().is_empty() || line.starts_with('#') => {}
                None => {
                    return Err(PipelineError::Dataset {
                        line: n,
                        message: "text before the first key".into(),
                    })
                }
            },
        }
    }
    let [id, task, env] = fields.map(|f| f.map(|l| l.join("\n").trim().to_string()));
    let err = |message: &str| PipelineError::Dataset {
        line: first,
        message: message.to_string(),
    };
    let id = id
        .filter(|s| !s.is_empty())
        .ok_or_else(|| err("entry without id"))?;
    let task = task
        .filter(|s| !s.is_empty())
        .ok_or_else(|| err("entry without task"))?;
    if !ids.insert(id.clone()) {
        return Err(err(&format!("duplicate id '{id}'")));
    }
    entries.push(TaskEntry {
        id,
        task,
        env: env.unwrap_or_default(),
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_and_separators() {
        let text = "id: one\ntask: Go straight.\nThen stop.\nenv:\nA road.\n---\nid: two\ntask: Turn left.\n";
        let d = parse_dataset(text).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].task, "Go straight.\nThen stop.");
        assert_eq!(d[0].env, "A road.");
        assert_eq!(d[1].env, "");
    }

    #[test]
    fn errors() {
        assert!(parse_dataset("task: x").is_err());
        assert!(parse_dataset("id: a\n").is_err());
        assert!(parse_dataset("id: a\ntask: x\n---\nid: a\ntask: y").is_err());
        assert!(parse_dataset("stray\nid: a\ntask: x").is_err());
        assert!(parse_dataset("").unwrap().is_empty());
    }
}
