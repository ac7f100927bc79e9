//! Codec tests against reference fixtures produced by the independent
//! encoder in `tests/data/make_fixtures.py`, plus round-trip and totality
//! properties.

use gridbox_core::dicom::{
    self, is_valid_uid, parse_dicom, serialize_dicom, tags, DicomError, DicomObject, Value, Vr,
};
use proptest::prelude::*;

const MINIMAL: &[u8] = include_bytes!("data/minimal.dcm");
const NESTED: &[u8] = include_bytes!("data/nested.dcm");

#[test]
fn parses_reference_minimal_file() {
    let obj = parse_dicom(MINIMAL).unwrap();
    assert_eq!(obj.get_str(tags::PATIENT_ID).unwrap(), "P0001");
    assert_eq!(obj.get_str(tags::PATIENT_NAME).unwrap(), "DOE^JANE");
    assert_eq!(obj.get_str(tags::PATIENT_AGE).unwrap(), "052Y");
    assert_eq!(obj.get_str(tags::PATIENT_SEX).unwrap(), "F");
    assert_eq!(obj.get_str(tags::MODALITY).unwrap(), "MG");
    assert_eq!(obj.get_str(tags::LATERALITY).unwrap(), "L");
    assert_eq!(obj.get_str(tags::VIEW_POSITION).unwrap(), "CC");
    assert_eq!(obj.get_u16(tags::ROWS).unwrap(), 16);
    assert_eq!(obj.get_u16(tags::COLUMNS).unwrap(), 8);
    assert_eq!(
        obj.sop_class_uid().unwrap(),
        "1.2.840.10008.5.1.4.1.1.1.2"
    );
    // PN value is stored at its unpadded even length of 8.
    let pn = obj.get(tags::PATIENT_NAME).unwrap();
    assert_eq!(pn.value.as_bytes().unwrap(), b"DOE^JANE");
    assert!(obj.missing_identity_tags().is_empty());
}

#[test]
fn reserializes_reference_files_byte_identically() {
    for fixture in [MINIMAL, NESTED] {
        let obj = parse_dicom(fixture).unwrap();
        let out = serialize_dicom(&obj).unwrap();
        assert_eq!(out, fixture);
    }
}

#[test]
fn parses_nested_sequences() {
    let obj = parse_dicom(NESTED).unwrap();
    let seq = obj.get(tags::REFERENCED_IMAGE_SEQUENCE).unwrap();
    let items = seq.value.as_items().unwrap();
    assert_eq!(items.len(), 2);
    let first = &items[0];
    let referenced = first.get(&tags::REFERENCED_SOP_INSTANCE_UID).unwrap();
    let uid = String::from_utf8_lossy(referenced.value.as_bytes().unwrap());
    assert!(uid.starts_with("1.2.826.0.1.3680043.10.1457.1.77.1"));
}

#[test]
fn rejects_missing_magic() {
    let zeros = vec![0u8; 132];
    assert!(matches!(parse_dicom(&zeros), Err(DicomError::NotDicom)));
    assert!(matches!(parse_dicom(b""), Err(DicomError::NotDicom)));
    assert!(matches!(parse_dicom(&vec![0u8; 4096]), Err(DicomError::NotDicom)));
}

#[test]
fn rejects_foreign_transfer_syntax() {
    // Patch the transfer syntax UID inside the fixture to implicit VR LE.
    let mut bytes = MINIMAL.to_vec();
    let needle = b"1.2.840.10008.1.2.1\x00";
    let pos = bytes.windows(needle.len()).position(|w| w == needle).unwrap();
    bytes[pos..pos + needle.len()].copy_from_slice(b"1.2.840.10008.1.2\x00\x00\x00");
    // Keep lengths consistent: shrink declared element length from 20 to 18.
    bytes[pos - 2] = 18;
    bytes.truncate(pos + 18);
    match parse_dicom(&bytes) {
        Err(DicomError::UnsupportedTransferSyntax(_)) | Err(DicomError::TruncatedElement { .. }) => {}
        other => panic!("expected transfer syntax rejection, got {other:?}"),
    }
}

#[test]
fn truncation_reports_truncated_element() {
    let cut = &MINIMAL[..MINIMAL.len() - 3];
    assert!(matches!(
        parse_dicom(cut),
        Err(DicomError::TruncatedElement { .. })
    ));
}

#[test]
fn serialization_is_deterministic() {
    let a = parse_dicom(MINIMAL).unwrap();
    let b = parse_dicom(MINIMAL).unwrap();
    assert_eq!(a, b);
    assert_eq!(serialize_dicom(&a).unwrap(), serialize_dicom(&b).unwrap());
}

#[test]
fn odd_length_value_rejected() {
    let mut obj = parse_dicom(MINIMAL).unwrap();
    obj.put(gridbox_core::dicom::Element {
        tag: tags::STUDY_DESCRIPTION,
        vr: Vr::LO,
        value: Value::Bytes(b"odd".to_vec()),
    });
    assert!(matches!(
        serialize_dicom(&obj),
        Err(DicomError::InvalidElement { .. })
    ));
}

#[test]
fn malformed_uid_rejected() {
    let mut obj = parse_dicom(MINIMAL).unwrap();
    obj.put_str(tags::SOP_INSTANCE_UID, Vr::UI, "1..99");
    assert!(matches!(
        serialize_dicom(&obj),
        Err(DicomError::InvalidElement { .. })
    ));
}

// --- randomized properties -------------------------------------------------

fn string_for(vr: Vr) -> BoxedStrategy<String> {
    match vr {
        Vr::UI => proptest::collection::vec(0u32..=9999, 1..6)
            .prop_map(|parts| {
                let mut s = String::from("1");
                for p in parts {
                    s.push('.');
                    s.push_str(&p.to_string());
                }
                s
            })
            .boxed(),
        Vr::DA => (1900u32..2100, 1u32..13, 1u32..29)
            .prop_map(|(y, m, d)| format!("{y:04}{m:02}{d:02}"))
            .boxed(),
        Vr::TM => (0u32..24, 0u32..60, 0u32..60)
            .prop_map(|(h, m, s)| format!("{h:02}{m:02}{s:02}"))
            .boxed(),
        Vr::AS => (0u32..120).prop_map(|y| format!("{y:03}Y")).boxed(),
        Vr::DS => (-9999i32..9999, 0u32..100)
            .prop_map(|(a, b)| format!("{a}.{b}"))
            .boxed(),
        Vr::IS => (-99999i64..99999).prop_map(|n| n.to_string()).boxed(),
        Vr::PN => "[A-Za-z]{1,8}(\\^[A-Za-z]{1,8})?".prop_map(|s| s).boxed(),
        Vr::CS => "[A-Z0-9_]{1,12}".prop_map(|s| s).boxed(),
        _ => "[ -Z^a-z]{0,24}".prop_map(|s| s).boxed(),
    }
}

fn leaf_element() -> BoxedStrategy<(gridbox_core::dicom::Tag, Vr, Vec<u8>)> {
    let string_vrs = prop_oneof![
        Just(Vr::AE), Just(Vr::AS), Just(Vr::CS), Just(Vr::DA), Just(Vr::TM),
        Just(Vr::DS), Just(Vr::IS), Just(Vr::LO), Just(Vr::LT), Just(Vr::PN),
        Just(Vr::SH), Just(Vr::ST), Just(Vr::UI), Just(Vr::UT),
    ];
    let tag = (0x0008u16..0x7F00, 0x0000u16..0xFFFF)
        .prop_map(|(g, e)| gridbox_core::dicom::Tag::new(g | 0x0008, e));
    prop_oneof![
        (tag.clone(), string_vrs).prop_flat_map(|(t, vr)| {
            string_for(vr).prop_map(move |s| {
                let mut b = s.into_bytes();
                if b.len() % 2 == 1 {
                    b.push(vr.pad_byte().unwrap_or(b' '));
                }
                (t, vr, b)
            })
        }),
        (tag.clone(), any::<u16>()).prop_map(|(t, v)| (t, Vr::US, v.to_le_bytes().to_vec())),
        (tag.clone(), any::<u32>()).prop_map(|(t, v)| (t, Vr::UL, v.to_le_bytes().to_vec())),
        (tag, proptest::collection::vec(any::<u8>(), 0..32)).prop_map(|(t, mut v)| {
            if v.len() % 2 == 1 {
                v.push(0);
            }
            (t, Vr::OB, v)
        }),
    ]
    .boxed()
}

fn arbitrary_object() -> impl Strategy<Value = DicomObject> {
    let leaves = proptest::collection::vec(leaf_element(), 1..16);
    let seq_items = proptest::collection::vec(
        proptest::collection::vec(leaf_element(), 1..4),
        0..3,
    );
    (leaves, seq_items, 0u16..0x70).prop_map(|(leaves, items, seq_elem)| {
        let mut obj = DicomObject::new();
        for (tag, vr, bytes) in leaves {
            obj.put(gridbox_core::dicom::Element {
                tag,
                vr,
                value: Value::Bytes(bytes),
            });
        }
        let datasets: Vec<_> = items
            .into_iter()
            .map(|elems| {
                let mut ds = gridbox_core::dicom::Dataset::new();
                for (tag, vr, bytes) in elems {
                    ds.insert(
                        tag,
                        gridbox_core::dicom::Element {
                            tag,
                            vr,
                            value: Value::Bytes(bytes),
                        },
                    );
                }
                ds
            })
            .collect();
        if !datasets.is_empty() {
            obj.put_items(gridbox_core::dicom::Tag::new(0x0040, 0xA000 | seq_elem), datasets);
        }
        obj.put_str(tags::SOP_CLASS_UID, Vr::UI, dicom::SOP_CLASS_MG_IMAGE);
        obj.put_str(tags::SOP_INSTANCE_UID, Vr::UI, "1.2.3.4.5");
        dicom::complete_file_meta(&mut obj);
        obj
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn round_trip_structural_and_byte_identity(obj in arbitrary_object()) {
        let bytes = serialize_dicom(&obj).unwrap();
        let parsed = parse_dicom(&bytes).unwrap();
        prop_assert_eq!(&parsed, &obj);
        let again = serialize_dicom(&parsed).unwrap();
        prop_assert_eq!(again, bytes);
    }

    #[test]
    fn element_iteration_is_tag_ordered(obj in arbitrary_object()) {
        let bytes = serialize_dicom(&obj).unwrap();
        let parsed = parse_dicom(&bytes).unwrap();
        let tags: Vec<_> = parsed.elements.keys().copied().collect();
        let mut sorted = tags.clone();
        sorted.sort();
        prop_assert_eq!(tags, sorted);
    }

    #[test]
    fn parser_never_panics_on_arbitrary_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..2048)) {
        let _ = parse_dicom(&bytes);
    }

    #[test]
    fn parser_never_panics_on_mutated_valid_files(
        idx in 0usize..622,
        byte in any::<u8>(),
        cut in 0usize..622,
    ) {
        let mut bytes = MINIMAL.to_vec();
        bytes[idx] = byte;
        let _ = parse_dicom(&bytes);
        bytes.truncate(cut);
        let _ = parse_dicom(&bytes);
    }
}

#[test]
fn uid_helper_agrees_with_writer() {
    assert!(is_valid_uid("1.2.840.10008.1.2.1"));
    assert!(!is_valid_uid("1.2.840.10008.1.2.1."));
}
