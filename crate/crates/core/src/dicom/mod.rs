//! A constrained DICOM Part-10 codec: explicit VR little endian only, with
//! lossless carriage of unrecognised tags and a canonical byte encoding so
//! that equal objects always serialize to equal bytes.

mod dict;
mod parse;
mod write;

pub use dict::{keyword_of, lookup, vr_of, DICT_VERSION};
pub use parse::parse_dicom;
pub use write::{complete_file_meta, serialize_dicom};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Explicit VR Little Endian, the only transfer syntax this codec accepts.
pub const TRANSFER_SYNTAX_EXPLICIT_VR_LE: &str = "1.2.840.10008.1.2.1";
/// Digital mammography X-ray image storage (for presentation).
pub const SOP_CLASS_MG_IMAGE: &str = "1.2.840.10008.5.1.4.1.1.1.2";
/// Mammography CAD structured report storage.
pub const SOP_CLASS_MAMMO_CAD_SR: &str = "1.2.840.10008.5.1.4.1.1.88.50";
/// UID root used for implementation and generated instance UIDs.
pub const IMPLEMENTATION_UID: &str = "1.2.826.0.1.3680043.10.1457.1";

/// SOP classes treated as structured reports by this node.
pub const SR_SOP_CLASSES: &[&str] = &[
    "1.2.840.10008.5.1.4.1.1.88.11",
    "1.2.840.10008.5.1.4.1.1.88.22",
    "1.2.840.10008.5.1.4.1.1.88.33",
    SOP_CLASS_MAMMO_CAD_SR,
];

#[derive(Debug, Error)]
pub enum DicomError {
    #[error("not a DICOM part-10 stream (missing preamble or DICM magic)")]
    NotDicom,
    #[error("unsupported transfer syntax {0:?}")]
    UnsupportedTransferSyntax(String),
    #[error("truncated element at offset {offset}: declared {declared} bytes, {remaining} remain")]
    TruncatedElement {
        offset: usize,
        declared: u64,
        remaining: usize,
    },
    #[error("invalid element {tag}: {reason}")]
    InvalidElement { tag: Tag, reason: String },
    #[error("object is not a structured report (SOP class {0:?})")]
    NotStructuredReport(String),
}

/// A (group, element) pair. Ordering is the file ordering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag {
    pub group: u16,
    pub element: u16,
}

impl Tag {
    pub const fn new(group: u16, element: u16) -> Self {
        Tag { group, element }
    }

    pub fn is_file_meta(&self) -> bool {
        self.group == 0x0002
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:04X},{:04X})", self.group, self.element)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub mod tags {
    //! Tag constants for the fields this node reads or writes directly.
    use super::Tag;

    pub const FILE_META_GROUP_LENGTH: Tag = Tag::new(0x0002, 0x0000);
    pub const FILE_META_VERSION: Tag = Tag::new(0x0002, 0x0001);
    pub const MEDIA_STORAGE_SOP_CLASS_UID: Tag = Tag::new(0x0002, 0x0002);
    pub const MEDIA_STORAGE_SOP_INSTANCE_UID: Tag = Tag::new(0x0002, 0x0003);
    pub const TRANSFER_SYNTAX_UID: Tag = Tag::new(0x0002, 0x0010);
    pub const IMPLEMENTATION_CLASS_UID: Tag = Tag::new(0x0002, 0x0012);

    pub const SOP_CLASS_UID: Tag = Tag::new(0x0008, 0x0016);
    pub const SOP_INSTANCE_UID: Tag = Tag::new(0x0008, 0x0018);
    pub const STUDY_DATE: Tag = Tag::new(0x0008, 0x0020);
    pub const ACCESSION_NUMBER: Tag = Tag::new(0x0008, 0x0050);
    pub const MODALITY: Tag = Tag::new(0x0008, 0x0060);
    pub const MANUFACTURER: Tag = Tag::new(0x0008, 0x0070);
    pub const REFERRING_PHYSICIAN_NAME: Tag = Tag::new(0x0008, 0x0090);
    pub const CODE_VALUE: Tag = Tag::new(0x0008, 0x0100);
    pub const CODING_SCHEME_DESIGNATOR: Tag = Tag::new(0x0008, 0x0102);
    pub const CODE_MEANING: Tag = Tag::new(0x0008, 0x0104);
    pub const STUDY_DESCRIPTION: Tag = Tag::new(0x0008, 0x1030);
    pub const REFERENCED_IMAGE_SEQUENCE: Tag = Tag::new(0x0008, 0x1140);
    pub const REFERENCED_SOP_CLASS_UID: Tag = Tag::new(0x0008, 0x1150);
    pub const REFERENCED_SOP_INSTANCE_UID: Tag = Tag::new(0x0008, 0x1155);

    pub const PATIENT_NAME: Tag = Tag::new(0x0010, 0x0010);
    pub const PATIENT_ID: Tag = Tag::new(0x0010, 0x0020);
    pub const PATIENT_BIRTH_DATE: Tag = Tag::new(0x0010, 0x0030);
    pub const PATIENT_SEX: Tag = Tag::new(0x0010, 0x0040);
    pub const OTHER_PATIENT_IDS: Tag = Tag::new(0x0010, 0x1000);
    pub const PATIENT_AGE: Tag = Tag::new(0x0010, 0x1010);
    pub const PATIENT_ADDRESS: Tag = Tag::new(0x0010, 0x1040);
    pub const PATIENT_TELEPHONE_NUMBERS: Tag = Tag::new(0x0010, 0x2154);
    pub const PATIENT_COMMENTS: Tag = Tag::new(0x0010, 0x4000);

    pub const VIEW_POSITION: Tag = Tag::new(0x0018, 0x5101);

    pub const STUDY_INSTANCE_UID: Tag = Tag::new(0x0020, 0x000D);
    pub const SERIES_INSTANCE_UID: Tag = Tag::new(0x0020, 0x000E);
    pub const LATERALITY: Tag = Tag::new(0x0020, 0x0060);
    pub const IMAGE_LATERALITY: Tag = Tag::new(0x0020, 0x0062);

    pub const ROWS: Tag = Tag::new(0x0028, 0x0010);
    pub const COLUMNS: Tag = Tag::new(0x0028, 0x0011);

    pub const MEASUREMENT_UNITS_CODE_SEQUENCE: Tag = Tag::new(0x0040, 0x08EA);
    pub const VALUE_TYPE: Tag = Tag::new(0x0040, 0xA040);
    pub const CONCEPT_NAME_CODE_SEQUENCE: Tag = Tag::new(0x0040, 0xA043);
    pub const TEXT_VALUE: Tag = Tag::new(0x0040, 0xA160);
    pub const CONCEPT_CODE_SEQUENCE: Tag = Tag::new(0x0040, 0xA168);
    pub const MEASURED_VALUE_SEQUENCE: Tag = Tag::new(0x0040, 0xA300);
    pub const NUMERIC_VALUE: Tag = Tag::new(0x0040, 0xA30A);
    pub const CONTENT_SEQUENCE: Tag = Tag::new(0x0040, 0xA730);

    pub const GRAPHIC_DATA: Tag = Tag::new(0x0070, 0x0022);
    pub const GRAPHIC_TYPE: Tag = Tag::new(0x0070, 0x0023);

    pub const PIXEL_DATA: Tag = Tag::new(0x7FE0, 0x0010);

    pub const ITEM: Tag = Tag::new(0xFFFE, 0xE000);
    pub const ITEM_DELIMITATION: Tag = Tag::new(0xFFFE, 0xE00D);
    pub const SEQUENCE_DELIMITATION: Tag = Tag::new(0xFFFE, 0xE0DD);
}

/// Value representation codes. The full standard table is known so that the
/// explicit-VR length form is always decodable; only a subset gets typed
/// accessors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[allow(clippy::upper_case_acronyms)]
pub enum Vr {
    AE, AS, AT, CS, DA, DS, DT, FD, FL, IS, LO, LT, OB, OD, OF, OL, OV, OW,
    PN, SH, SL, SQ, SS, ST, SV, TM, UC, UI, UL, UN, UR, US, UT, UV,
}

impl Vr {
    pub fn from_bytes(b: [u8; 2]) -> Option<Vr> {
        use Vr::*;
        Some(match &b {
            b"AE" => AE, b"AS" => AS, b"AT" => AT, b"CS" => CS, b"DA" => DA,
            b"DS" => DS, b"DT" => DT, b"FD" => FD, b"FL" => FL, b"IS" => IS,
            b"LO" => LO, b"LT" => LT, b"OB" => OB, b"OD" => OD, b"OF" => OF,
            b"OL" => OL, b"OV" => OV, b"OW" => OW, b"PN" => PN, b"SH" => SH,
            b"SL" => SL, b"SQ" => SQ, b"SS" => SS, b"ST" => ST, b"SV" => SV,
            b"TM" => TM, b"UC" => UC, b"UI" => UI, b"UL" => UL, b"UN" => UN,
            b"UR" => UR, b"US" => US, b"UT" => UT, b"UV" => UV,
            _ => return None,
        })
    }

    pub fn as_bytes(self) -> [u8; 2] {
        let s = format!("{self:?}");
        let b = s.as_bytes();
        [b[0], b[1]]
    }

    /// Whether the explicit-VR encoding uses the 2-byte reserved field and a
    /// 32-bit length instead of a 16-bit length.
    pub fn uses_long_length(self) -> bool {
        use Vr::*;
        matches!(self, OB | OD | OF | OL | OV | OW | SQ | UC | UN | UR | UT | SV | UV)
    }

    /// Pad byte for odd-length values, if the VR is padded at all.
    pub fn pad_byte(self) -> Option<u8> {
        use Vr::*;
        match self {
            UI => Some(0x00),
            OB | UN => Some(0x00),
            AE | AS | CS | DA | DS | DT | IS | LO | LT | PN | SH | ST | TM | UC | UR | UT => {
                Some(b' ')
            }
            _ => None,
        }
    }

    /// VRs whose values this codec interprets as text.
    pub fn is_string(self) -> bool {
        use Vr::*;
        matches!(
            self,
            AE | AS | CS | DA | DS | DT | IS | LO | LT | PN | SH | ST | TM | UC | UI | UR | UT
        )
    }
}

/// Element payload: raw bytes for every VR except SQ, which nests item
/// datasets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Bytes(Vec<u8>),
    Items(Vec<Dataset>),
}

impl Value {
    pub fn as_bytes(&self) -> Option<&[u8]> {
        match self {
            Value::Bytes(b) => Some(b),
            Value::Items(_) => None,
        }
    }

    pub fn as_items(&self) -> Option<&[Dataset]> {
        match self {
            Value::Items(i) => Some(i),
            Value::Bytes(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub tag: Tag,
    pub vr: Vr,
    pub value: Value,
}

/// A tag-ordered element map. The map form makes the ascending-tag invariant
/// structural rather than checked.
pub type Dataset = BTreeMap<Tag, Element>;

/// A parsed DICOM object: file-meta and dataset elements in one ordered map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DicomObject {
    pub elements: Dataset,
}

impl DicomObject {
    pub fn new() -> Self {
        DicomObject::default()
    }

    pub fn get(&self, tag: Tag) -> Option<&Element> {
        self.elements.get(&tag)
    }

    pub fn contains(&self, tag: Tag) -> bool {
        self.elements.contains_key(&tag)
    }

    pub fn remove(&mut self, tag: Tag) -> Option<Element> {
        self.elements.remove(&tag)
    }

    pub fn put(&mut self, element: Element) {
        self.elements.insert(element.tag, element);
    }

    /// String value of a text-VR element with trailing padding trimmed.
    pub fn get_str(&self, tag: Tag) -> Option<String> {
        let el = self.get(tag)?;
        let bytes = el.value.as_bytes()?;
        let text = String::from_utf8_lossy(bytes);
        Some(text.trim_end_matches(['\0', ' ']).to_string())
    }

    /// Inserts a string element, padding to even length as the VR requires.
    pub fn put_str(&mut self, tag: Tag, vr: Vr, value: &str) {
        let mut bytes = value.as_bytes().to_vec();
        if bytes.len() % 2 == 1 {
            bytes.push(vr.pad_byte().unwrap_or(b' '));
        }
        self.put(Element {
            tag,
            vr,
            value: Value::Bytes(bytes),
        });
    }

    pub fn get_u16(&self, tag: Tag) -> Option<u16> {
        let el = self.get(tag)?;
        let b = el.value.as_bytes()?;
        if b.len() < 2 {
            return None;
        }
        Some(u16::from_le_bytes([b[0], b[1]]))
    }

    pub fn put_u16(&mut self, tag: Tag, value: u16) {
        self.put(Element {
            tag,
            vr: Vr::US,
            value: Value::Bytes(value.to_le_bytes().to_vec()),
        });
    }

    pub fn put_u32(&mut self, tag: Tag, value: u32) {
        self.put(Element {
            tag,
            vr: Vr::UL,
            value: Value::Bytes(value.to_le_bytes().to_vec()),
        });
    }

    pub fn put_bytes(&mut self, tag: Tag, vr: Vr, mut bytes: Vec<u8>) {
        if bytes.len() % 2 == 1 {
            bytes.push(vr.pad_byte().unwrap_or(0));
        }
        self.put(Element {
            tag,
            vr,
            value: Value::Bytes(bytes),
        });
    }

    pub fn put_items(&mut self, tag: Tag, items: Vec<Dataset>) {
        self.put(Element {
            tag,
            vr: Vr::SQ,
            value: Value::Items(items),
        });
    }

    pub fn sop_instance_uid(&self) -> Option<String> {
        self.get_str(tags::SOP_INSTANCE_UID)
    }

    pub fn sop_class_uid(&self) -> Option<String> {
        self.get_str(tags::SOP_CLASS_UID)
    }

    pub fn is_structured_report(&self) -> bool {
        self.sop_class_uid()
            .map(|c| SR_SOP_CLASSES.contains(&c.as_str()))
            .unwrap_or(false)
    }

    /// Byte count of the canonical part-10 encoding.
    pub fn raw_length(&self) -> Result<usize, DicomError> {
        Ok(serialize_dicom(self)?.len())
    }

    /// Checks the identity tags a storable image object must carry.
    pub fn missing_identity_tags(&self) -> Vec<Tag> {
        [
            tags::SOP_INSTANCE_UID,
            tags::SOP_CLASS_UID,
            tags::STUDY_INSTANCE_UID,
            tags::SERIES_INSTANCE_UID,
            tags::PATIENT_ID,
        ]
        .into_iter()
        .filter(|t| self.get_str(*t).map(|s| s.is_empty()).unwrap_or(true))
        .collect()
    }
}

/// UID syntax check: dotted decimal components, no leading zeros except a
/// lone zero, at most 64 characters.
pub fn is_valid_uid(uid: &str) -> bool {
    if uid.is_empty() || uid.len() > 64 {
        return false;
    }
    uid.split('.').all(|part| {
        !part.is_empty()
            && part.bytes().all(|b| b.is_ascii_digit())
            && (part == "0" || !part.starts_with('0'))
    })
}
