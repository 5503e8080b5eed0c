//! JSON forms of systems, subdivisions and tilings. All colors and letters
//! are 1-indexed.
//!
//! * system: `{"n": 3, "d": 3, "perms": {"1,2": [1,3,2], "2,3": [...], ...}}`;
//!   a key `"b,a"` with `b > a` gives `σ_ba`, the reverse of `σ_ab`. `n`
//!   and `d` may be omitted.
//! * subdivision: `{"n": 2, "d": 3, "cells": [[[1,2,3],[2]], ...]}`.
//! * tiling: `{"n": 2, "triangles": [[0,1,0],[0,0,1]], "rhombi": [[[0,0,0],1]]}`
//!   with triangle positions in color order and rhombi as `[z, orientation]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lozenge::{LozengeTiling, Point};
use crate::perm::Permutation;
use crate::subdivision::{FineMixedSubdivision, MixedCell};
use crate::system::SystemOfPermutations;
use crate::tournament::pairs;

#[derive(Serialize, Deserialize)]
struct SystemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    perms: BTreeMap<String, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct SubdivisionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    cells: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct TilingJson {
    n: usize,
    triangles: Vec<Point>,
    rhombi: Vec<(Point, usize)>,
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn system_to_json(s: &SystemOfPermutations) -> Value {
    // Keys sort as strings; a plain map keeps the output deterministic.
    let perms = pairs(s.d())
        .map(|(a, b)| (format!("{a},{b}"), s.perm(a, b).into_word()))
        .collect();
    serde_json::to_value(SystemJson {
        n: Some(s.n()),
        d: Some(s.d()),
        perms,
    })
    .expect("plain data serializes")
}

pub fn system_from_json(v: &Value) -> Result<SystemOfPermutations> {
    let raw: SystemJson = parse(v, "system")?;
    let mut entries = Vec::new();
    for (key, word) in raw.perms {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        let [a, b] = parts.as_slice() else {
            return Err(Error::Parse(format!("permutation key {key:?} is not \"a,b\"")));
        };
        let letter = |s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&x| x >= 1)
                .ok_or_else(|| Error::Parse(format!("bad letter {s:?} in key {key:?}")))
        };
        let (a, b) = (letter(a)?, letter(b)?);
        if a == b {
            return Err(Error::Parse(format!("key {key:?} repeats a letter")));
        }
        entries.push(((a, b), Permutation::from_word(word)?));
    }
    let n = raw.n.or_else(|| entries.first().map(|(_, p)| p.len())).unwrap_or(1);
    let d = raw
        .d
        .or_else(|| entries.iter().map(|((a, b), _)| (*a).max(*b)).max())
        .unwrap_or(1);
    SystemOfPermutations::from_pairs(n, d, entries)
}

pub fn subdivision_to_json(s: &FineMixedSubdivision) -> Value {
    serde_json::to_value(SubdivisionJson {
        n: Some(s.n()),
        d: Some(s.d()),
        cells: s.cells().iter().map(MixedCell::to_lists).collect(),
    })
    .expect("plain data serializes")
}

pub fn subdivision_from_json(v: &Value) -> Result<FineMixedSubdivision> {
    let raw: SubdivisionJson = parse(v, "subdivision")?;
    let n = raw
        .n
        .or_else(|| raw.cells.first().map(Vec::len))
        .ok_or_else(|| Error::Parse("subdivision needs \"n\" or at least one cell".into()))?;
    let d = raw
        .d
        .or_else(|| raw.cells.iter().flatten().flatten().copied().max())
        .ok_or_else(|| Error::Parse("subdivision needs \"d\" or at least one cell".into()))?;
    for list in raw.cells.iter().flatten() {
        if let Some(&a) = list.iter().find(|&&a| a == 0 || a > d) {
            return Err(Error::LetterOutOfRange { letter: a, d });
        }
    }
    let cells = raw.cells.iter().map(|c| MixedCell::from_lists(c)).collect();
    FineMixedSubdivision::new(n, d, cells)
}

pub fn tiling_to_json(t: &LozengeTiling) -> Value {
    serde_json::to_value(TilingJson {
        n: t.n(),
        triangles: t.triangles().to_vec(),
        rhombi: t.rhombi(),
    })
    .expect("plain data serializes")
}

pub fn tiling_from_json(v: &Value) -> Result<LozengeTiling> {
    let raw: TilingJson = parse(v, "tiling")?;
    LozengeTiling::new(raw.n, raw.triangles, &raw.rhombi)
}
