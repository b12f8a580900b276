//! The `.mfn` text format.
//!
//! ```text
//! # comment
//! points a b c
//! kind single        # optional; every point then needs exactly one target
//! a -> b
//! b -> a c
//! ```
//!
//! Sources without a line have an empty image. The canonical form keeps
//! declaration order, omits empty images and has no trailing newline.

use std::sync::Arc;

use crate::instances::Instance;
use crate::mf::{GroundSet, Multifunction, SingleMap};
use crate::{Error, PointSet, Result};

/// Parses a document into a multifunction, or a map if it says `kind single`.
pub fn parse(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `points` declaration"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("points") {
        return Err(Error::parse(header_line, "expected `points <label>+`"));
    }
    let labels: Vec<&str> = tokens.collect();
    if labels.is_empty() {
        return Err(Error::parse(header_line, "`points` declares no labels"));
    }
    let ground = Arc::new(GroundSet::new(labels.iter().copied()).map_err(|e| match e {
        Error::DuplicateLabel(l) => Error::parse(header_line, format!("duplicate label {l}")),
        Error::InvalidLabel(l) => Error::parse(header_line, format!("invalid label {l}")),
        other => Error::parse(header_line, other.to_string()),
    })?);

    let mut single_line = None;
    let mut images: Vec<Option<(usize, Vec<usize>)>> = vec![None; ground.size()];
    let mut first = true;
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if first && tokens == ["kind", "single"] {
            single_line = Some(line);
            first = false;
            continue;
        }
        first = false;
        if tokens.len() < 2 || tokens[1] != "->" {
            return Err(Error::parse(line, "expected `<label> -> <label>*`"));
        }
        let lookup = |l: &str| ground.index_of(l).ok_or_else(|| Error::parse(line, format!("undeclared label {l}")));
        let source = lookup(tokens[0])?;
        if images[source].is_some() {
            return Err(Error::parse(line, format!("duplicate source line for {}", tokens[0])));
        }
        let targets = tokens[2..].iter().map(|t| lookup(t)).collect::<Result<Vec<_>>>()?;
        images[source] = Some((line, targets));
    }

    match single_line {
        None => {
            let sets = images.into_iter().map(|i| i.map(|(_, t)| t.into_iter().collect()).unwrap_or_default()).collect();
            Ok(Instance::Multi(Multifunction::new(ground, sets)?))
        }
        Some(kind_line) => {
            let mut map = Vec::with_capacity(ground.size());
            for (x, image) in images.into_iter().enumerate() {
                let label = ground.label(x);
                match image {
                    None => return Err(Error::parse(kind_line, format!("single map has no image for {label}"))),
                    Some((line, targets)) => {
                        let set: PointSet = targets.into_iter().collect();
                        if set.len() != 1 {
                            return Err(Error::parse(line, format!("single map needs exactly one target for {label}")));
                        }
                        map.push(set.iter().next().expect("one element"));
                    }
                }
            }
            Ok(Instance::Map(SingleMap::new(ground, map)?))
        }
    }
}

/// Parses any document as a multifunction, embedding maps.
pub fn parse_multifunction(text: &str) -> Result<Multifunction> {
    Ok(match parse(text)? {
        Instance::Multi(f) => f,
        Instance::Map(f) => f.to_multifunction(),
    })
}

fn header(ground: &GroundSet) -> String {
    format!("points {}", ground.labels().join(" "))
}

pub fn serialize_multifunction(f: &Multifunction) -> String {
    let g = f.ground();
    let mut lines = vec![header(g)];
    for (x, image) in f.images().iter().enumerate() {
        if image.is_empty() {
            continue;
        }
        let targets: Vec<&str> = image.iter().map(|y| g.label(y)).collect();
        lines.push(format!("{} -> {}", g.label(x), targets.join(" ")));
    }
    lines.join("\n")
}

pub fn serialize_map(f: &SingleMap) -> String {
    let g = f.ground();
    let mut lines = vec![header(g), "kind single".to_string()];
    for (x, &y) in f.as_slice().iter().enumerate() {
        lines.push(format!("{} -> {}", g.label(x), g.label(y)));
    }
    lines.join("\n")
}

pub fn serialize(doc: &Instance) -> String {
    match doc {
        Instance::Multi(f) => serialize_multifunction(f),
        Instance::Map(f) => serialize_map(f),
    }
}
