//! Canonical Part-10 writer: explicit VR little endian, defined lengths
//! everywhere, ascending tag order. Equal objects produce equal bytes.

use super::tags;
use super::{Dataset, DicomError, DicomObject, Element, Tag, Value, Vr};
use super::{is_valid_uid, IMPLEMENTATION_UID, TRANSFER_SYNTAX_EXPLICIT_VR_LE};

const PREAMBLE_LEN: usize = 128;

/// Serializes to the canonical encoding. Mandatory file-meta elements are
/// derived from the dataset when the object does not already carry them; the
/// group length is always recomputed.
pub fn serialize_dicom(obj: &DicomObject) -> Result<Vec<u8>, DicomError> {
    let mut meta: Dataset = Dataset::new();
    let mut dataset_elements: Vec<&Element> = Vec::new();
    for (tag, el) in &obj.elements {
        if *tag == tags::FILE_META_GROUP_LENGTH {
            continue; // recomputed below
        }
        if tag.is_file_meta() {
            meta.insert(*tag, el.clone());
        } else {
            dataset_elements.push(el);
        }
    }

    ensure_meta(&mut meta, obj)?;

    let syntax = str_of(&meta, tags::TRANSFER_SYNTAX_UID).unwrap_or_default();
    if syntax != TRANSFER_SYNTAX_EXPLICIT_VR_LE {
        return Err(DicomError::UnsupportedTransferSyntax(syntax));
    }

    let mut meta_buf = Vec::new();
    for el in meta.values() {
        write_element(&mut meta_buf, el)?;
    }

    let mut out = vec![0u8; PREAMBLE_LEN];
    out.extend_from_slice(b"DICM");
    write_element(
        &mut out,
        &Element {
            tag: tags::FILE_META_GROUP_LENGTH,
            vr: Vr::UL,
            value: Value::Bytes((meta_buf.len() as u32).to_le_bytes().to_vec()),
        },
    )?;
    out.extend_from_slice(&meta_buf);
    for el in dataset_elements {
        write_element(&mut out, el)?;
    }
    Ok(out)
}

/// Inserts the mandatory file-meta elements an object will be serialized
/// with, so that parse(serialize(obj)) compares equal to obj.
pub fn complete_file_meta(obj: &mut DicomObject) {
    let sop_class = obj.sop_class_uid().unwrap_or_default();
    let sop_instance = obj.sop_instance_uid().unwrap_or_default();
    if !obj.contains(tags::FILE_META_VERSION) {
        obj.put(Element {
            tag: tags::FILE_META_VERSION,
            vr: Vr::OB,
            value: Value::Bytes(vec![0x00, 0x01]),
        });
    }
    if !obj.contains(tags::MEDIA_STORAGE_SOP_CLASS_UID) {
        obj.put_str(tags::MEDIA_STORAGE_SOP_CLASS_UID, Vr::UI, &sop_class);
    }
    if !obj.contains(tags::MEDIA_STORAGE_SOP_INSTANCE_UID) {
        obj.put_str(tags::MEDIA_STORAGE_SOP_INSTANCE_UID, Vr::UI, &sop_instance);
    }
    if !obj.contains(tags::TRANSFER_SYNTAX_UID) {
        obj.put_str(tags::TRANSFER_SYNTAX_UID, Vr::UI, TRANSFER_SYNTAX_EXPLICIT_VR_LE);
    }
    if !obj.contains(tags::IMPLEMENTATION_CLASS_UID) {
        obj.put_str(tags::IMPLEMENTATION_CLASS_UID, Vr::UI, IMPLEMENTATION_UID);
    }
}

fn str_of(ds: &Dataset, tag: Tag) -> Option<String> {
    let el = ds.get(&tag)?;
    let b = el.value.as_bytes()?;
    Some(String::from_utf8_lossy(b).trim_end_matches(['\0', ' ']).to_string())
}

fn ensure_meta(meta: &mut Dataset, obj: &DicomObject) -> Result<(), DicomError> {
    let mut put_str = |tag: Tag, vr: Vr, value: &str| {
        let mut bytes = value.as_bytes().to_vec();
        if bytes.len() % 2 == 1 {
            bytes.push(vr.pad_byte().unwrap_or(0));
        }
        meta.entry(tag).or_insert(Element {
            tag,
            vr,
            value: Value::Bytes(bytes),
        });
    };
    put_str(
        tags::MEDIA_STORAGE_SOP_CLASS_UID,
        Vr::UI,
        &obj.sop_class_uid().unwrap_or_default(),
    );
    put_str(
        tags::MEDIA_STORAGE_SOP_INSTANCE_UID,
        Vr::UI,
        &obj.sop_instance_uid().unwrap_or_default(),
    );
    put_str(tags::TRANSFER_SYNTAX_UID, Vr::UI, TRANSFER_SYNTAX_EXPLICIT_VR_LE);
    put_str(tags::IMPLEMENTATION_CLASS_UID, Vr::UI, IMPLEMENTATION_UID);
    meta.entry(tags::FILE_META_VERSION).or_insert(Element {
        tag: tags::FILE_META_VERSION,
        vr: Vr::OB,
        value: Value::Bytes(vec![0x00, 0x01]),
    });
    Ok(())
}

fn write_element(out: &mut Vec<u8>, el: &Element) -> Result<(), DicomError> {
    if el.tag.group == 0xFFFE {
        return Err(DicomError::InvalidElement {
            tag: el.tag,
            reason: "delimitation tags cannot be written as elements".into(),
        });
    }
    match (&el.value, el.vr) {
        (Value::Items(_), vr) if vr != Vr::SQ => {
            return Err(DicomError::InvalidElement {
                tag: el.tag,
                reason: "nested items on a non-SQ element".into(),
            })
        }
        (Value::Bytes(_), Vr::SQ) => {
            return Err(DicomError::InvalidElement {
                tag: el.tag,
                reason: "SQ element carrying raw bytes".into(),
            })
        }
        _ => {}
    }

    let body = match &el.value {
        Value::Bytes(b) => {
            if b.len() % 2 == 1 {
                return Err(DicomError::InvalidElement {
                    tag: el.tag,
                    reason: format!("odd value length {}", b.len()),
                });
            }
            if el.vr == Vr::UI {
                let text = String::from_utf8_lossy(b);
                let trimmed = text.trim_end_matches('\0');
                for uid in trimmed.split('\\').filter(|u| !u.is_empty()) {
                    if !is_valid_uid(uid) {
                        return Err(DicomError::InvalidElement {
                            tag: el.tag,
                            reason: format!("malformed UID {uid:?}"),
                        });
                    }
                }
            }
            b.clone()
        }
        Value::Items(items) => {
            let mut buf = Vec::new();
            for item in items {
                let mut item_buf = Vec::new();
                for sub in item.values() {
                    write_element(&mut item_buf, sub)?;
                }
                buf.extend_from_slice(&tags::ITEM.group.to_le_bytes());
                buf.extend_from_slice(&tags::ITEM.element.to_le_bytes());
                buf.extend_from_slice(&(item_buf.len() as u32).to_le_bytes());
                buf.extend_from_slice(&item_buf);
            }
            buf
        }
    };

    out.extend_from_slice(&el.tag.group.to_le_bytes());
    out.extend_from_slice(&el.tag.element.to_le_bytes());
    out.extend_from_slice(&el.vr.as_bytes());
    if el.vr.uses_long_length() {
        out.extend_from_slice(&[0, 0]);
        out.extend_from_slice(&(body.len() as u32).to_le_bytes());
    } else {
        if body.len() > u16::MAX as usize {
            return Err(DicomError::InvalidElement {
                tag: el.tag,
                reason: format!("value of {} bytes exceeds short length form", body.len()),
            });
        }
        out.extend_from_slice(&(body.len() as u16).to_le_bytes());
    }
    out.extend_from_slice(&body);
    Ok(())
}
