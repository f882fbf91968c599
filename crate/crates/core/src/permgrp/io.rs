//! Text formats for permutations and generator lists.
//!
//! A permutation file is one line of space-separated decimal images. A group
//! file starts with a line holding the degree, followed by one permutation
//! per line (possibly none, for the trivial group).

use super::{PermError, PermGroup, Permutation};

pub fn format_permutation(p: &Permutation) -> String {
    format!("{p}\n")
}

pub fn parse_permutation(text: &str) -> Result<Permutation, PermError> {
    let line = text.trim();
    let images: Vec<u32> = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| PermError::Parse {
                line: 1,
                msg: format!("bad image {tok:?}"),
            })
        })
        .collect::<Result<_, _>>()?;
    if images.is_empty() {
        return Err(PermError::Parse {
            line: 1,
            msg: "empty permutation".into(),
        });
    }
    let d = images.len();
    Permutation::from_images(images).map_err(|_| PermError::Parse {
        line: 1,
        msg: format!("images are not a permutation of 0..{d}"),
    })
}

pub fn format_group(g: &PermGroup) -> String {
    let mut out = format!("{}\n", g.degree());
    for gen in g.generators() {
        out.push_str(&format_permutation(gen));
    }
    out
}

pub fn parse_group(text: &str) -> Result<PermGroup, PermError> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(PermError::Parse {
        line: 1,
        msg: "empty group file".into(),
    })?;
    let degree: usize = first.trim().parse().map_err(|_| PermError::Parse {
        line: 1,
        msg: format!("bad degree {:?}", first.trim()),
    })?;
    let mut gens = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let p = parse_permutation(line).map_err(|e| match e {
            PermError::Parse { msg, .. } => PermError::Parse { line: i + 1, msg },
            other => other,
        })?;
        if p.degree() != degree {
            return Err(PermError::Parse {
                line: i + 1,
                msg: format!("degree {} does not match header {degree}", p.degree()),
            });
        }
        gens.push(p);
    }
    Ok(PermGroup::new(degree, gens))
}
