//! Supported-tag dictionary, loaded from the versioned data file shipped with
//! the crate.

use std::collections::HashMap;

use once_cell::sync::Lazy;

use super::{Tag, Vr};

const DICT_TSV: &str = include_str!("../../data/dicom-tags.tsv");

/// Version string from the data file header.
pub static DICT_VERSION: Lazy<String> = Lazy::new(|| {
    DICT_TSV
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .unwrap_or("unknown")
        .to_string()
});

static DICT: Lazy<HashMap<Tag, (Vr, &'static str)>> = Lazy::new(|| {
    let mut map = HashMap::new();
    for line in DICT_TSV.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let (Some(g), Some(e), Some(vr), Some(kw)) =
            (cols.next(), cols.next(), cols.next(), cols.next())
        else {
            panic!("malformed dictionary line: {line:?}");
        };
        let tag = Tag::new(
            u16::from_str_radix(g, 16).expect("bad group"),
            u16::from_str_radix(e, 16).expect("bad element"),
        );
        let vr = Vr::from_bytes([vr.as_bytes()[0], vr.as_bytes()[1]]).expect("bad VR");
        map.insert(tag, (vr, kw));
    }
    map
});

pub fn lookup(tag: Tag) -> Option<(Vr, &'static str)> {
    DICT.get(&tag).copied()
}

pub fn vr_of(tag: Tag) -> Option<Vr> {
    lookup(tag).map(|(vr, _)| vr)
}

pub fn keyword_of(tag: Tag) -> Option<&'static str> {
    lookup(tag).map(|(_, kw)| kw)
}
