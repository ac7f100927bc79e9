//! Part-10 reader. Bounds-checked throughout: arbitrary input yields either
//! an object or a `DicomError`, never a panic.

use super::tags;
use super::{Dataset, DicomError, DicomObject, Element, Tag, Value, Vr};
use super::TRANSFER_SYNTAX_EXPLICIT_VR_LE;

const PREAMBLE_LEN: usize = 128;
const UNDEFINED_LENGTH: u32 = 0xFFFF_FFFF;
const MAX_SEQUENCE_DEPTH: usize = 64;

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
    /// Offset of `data[0]` in the whole stream, for error reporting.
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(data: &'a [u8], base: usize) -> Self {
        Cursor { data, pos: 0, base }
    }

    fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }

    fn take(&mut self, n: usize, declared: u64) -> Result<&'a [u8], DicomError> {
        if n > self.remaining() {
            return Err(DicomError::TruncatedElement {
                offset: self.offset(),
                declared,
                remaining: self.remaining(),
            });
        }
        let slice = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn read_u16(&mut self) -> Result<u16, DicomError> {
        let b = self.take(2, 2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn read_u32(&mut self) -> Result<u32, DicomError> {
        let b = self.take(4, 4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn read_tag(&mut self) -> Result<Tag, DicomError> {
        let group = self.read_u16()?;
        let element = self.read_u16()?;
        Ok(Tag::new(group, element))
    }

    fn peek_tag(&self) -> Option<Tag> {
        if self.remaining() < 4 {
            return None;
        }
        let b = &self.data[self.pos..self.pos + 4];
        Some(Tag::new(
            u16::from_le_bytes([b[0], b[1]]),
            u16::from_le_bytes([b[2], b[3]]),
        ))
    }
}

/// Parses a Part-10 stream: 128-byte preamble, "DICM", explicit-VR-LE file
/// meta, explicit-VR-LE dataset. Unrecognised tags are preserved opaquely.
pub fn parse_dicom(bytes: &[u8]) -> Result<DicomObject, DicomError> {
    if bytes.len() < PREAMBLE_LEN + 4 || &bytes[PREAMBLE_LEN..PREAMBLE_LEN + 4] != b"DICM" {
        return Err(DicomError::NotDicom);
    }
    let mut cur = Cursor::new(&bytes[PREAMBLE_LEN + 4..], PREAMBLE_LEN + 4);

    let mut object = DicomObject::new();

    // File meta: mandatory (0002,0000) group length delimits the region.
    match cur.peek_tag() {
        Some(t) if t == tags::FILE_META_GROUP_LENGTH => {}
        _ => return Err(DicomError::NotDicom),
    }
    let (_, len_el) = read_element(&mut cur, 0)?;
    let meta_len = match &len_el.value {
        Value::Bytes(b) if b.len() == 4 => u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as usize,
        _ => {
            return Err(DicomError::InvalidElement {
                tag: tags::FILE_META_GROUP_LENGTH,
                reason: "file meta group length must be a 4-byte UL".into(),
            })
        }
    };
    let meta_base = cur.offset();
    let meta_bytes = cur.take(meta_len, meta_len as u64)?;
    let mut meta_cur = Cursor::new(meta_bytes, meta_base);
    while meta_cur.remaining() > 0 {
        let (tag, el) = read_element(&mut meta_cur, 0)?;
        if !tag.is_file_meta() {
            return Err(DicomError::InvalidElement {
                tag,
                reason: "non-group-0002 element inside file meta region".into(),
            });
        }
        object.put(el);
    }

    let syntax = object
        .get_str(tags::TRANSFER_SYNTAX_UID)
        .unwrap_or_default();
    if syntax != TRANSFER_SYNTAX_EXPLICIT_VR_LE {
        return Err(DicomError::UnsupportedTransferSyntax(syntax));
    }

    // Dataset runs to the end of the stream.
    while cur.remaining() > 0 {
        let (_, el) = read_element(&mut cur, 0)?;
        object.put(el);
    }
    Ok(object)
}

fn read_element(cur: &mut Cursor<'_>, depth: usize) -> Result<(Tag, Element), DicomError> {
    let tag = cur.read_tag()?;
    if tag.group == 0xFFFE {
        return Err(DicomError::InvalidElement {
            tag,
            reason: "delimitation tag outside a sequence".into(),
        });
    }
    let vr_bytes = cur.take(2, 2)?;
    let vr = Vr::from_bytes([vr_bytes[0], vr_bytes[1]]).ok_or_else(|| {
        DicomError::InvalidElement {
            tag,
            reason: format!("unrecognised VR {:?}", String::from_utf8_lossy(vr_bytes)),
        }
    })?;

    let length = if vr.uses_long_length() {
        cur.take(2, 2)?; // reserved
        cur.read_u32()?
    } else {
        u32::from(cur.read_u16()?)
    };

    let value = if vr == Vr::SQ {
        Value::Items(read_items(cur, length, depth)?)
    } else if length == UNDEFINED_LENGTH {
        return Err(DicomError::InvalidElement {
            tag,
            reason: "undefined length on a non-sequence element".into(),
        });
    } else {
        Value::Bytes(cur.take(length as usize, u64::from(length))?.to_vec())
    };

    Ok((tag, Element { tag, vr, value }))
}

fn read_items(cur: &mut Cursor<'_>, length: u32, depth: usize) -> Result<Vec<Dataset>, DicomError> {
    if depth >= MAX_SEQUENCE_DEPTH {
        return Err(DicomError::InvalidElement {
            tag: tags::ITEM,
            reason: "sequence nesting too deep".into(),
        });
    }
    let mut items = Vec::new();
    if length == UNDEFINED_LENGTH {
        loop {
            let tag = cur.read_tag()?;
            let item_len = cur.read_u32()?;
            match tag {
                t if t == tags::SEQUENCE_DELIMITATION => break,
                t if t == tags::ITEM => items.push(read_item_body(cur, item_len, depth)?),
                other => {
                    return Err(DicomError::InvalidElement {
                        tag: other,
                        reason: "expected item or sequence delimiter".into(),
                    })
                }
            }
        }
    } else {
        let base = cur.offset();
        let region = cur.take(length as usize, u64::from(length))?;
        let mut sub = Cursor::new(region, base);
        while sub.remaining() > 0 {
            let tag = sub.read_tag()?;
            let item_len = sub.read_u32()?;
            if tag != tags::ITEM {
                return Err(DicomError::InvalidElement {
                    tag,
                    reason: "expected item header inside sequence".into(),
                });
            }
            items.push(read_item_body(&mut sub, item_len, depth)?);
        }
    }
    Ok(items)
}

fn read_item_body(
    cur: &mut Cursor<'_>,
    item_len: u32,
    depth: usize,
) -> Result<Dataset, DicomError> {
    let mut dataset = Dataset::new();
    if item_len == UNDEFINED_LENGTH {
        loop {
            match cur.peek_tag() {
                Some(t) if t == tags::ITEM_DELIMITATION => {
                    cur.read_tag()?;
                    cur.read_u32()?;
                    break;
                }
                Some(_) => {
                    let (tag, el) = read_element(cur, depth + 1)?;
                    dataset.insert(tag, el);
                }
                None => {
                    return Err(DicomError::TruncatedElement {
                        offset: cur.offset(),
                        declared: u64::from(UNDEFINED_LENGTH),
                        remaining: cur.remaining(),
                    })
                }
            }
        }
    } else {
        let base = cur.offset();
        let region = cur.take(item_len as usize, u64::from(item_len))?;
        let mut sub = Cursor::new(region, base);
        while sub.remaining() > 0 {
            let (tag, el) = read_element(&mut sub, depth + 1)?;
            dataset.insert(tag, el);
        }
    }
    Ok(dataset)
}
