//! Federation-wide naming: node ids, virtual organisations, logical and
//! physical file names.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a grid-box node. Doubles as the DICOM application entity
/// title in rendered PFNs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

/// Virtual organisation identifier. Data and credentials are scoped to VOs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VoId(pub String);

impl VoId {
    pub fn new(id: impl Into<String>) -> Self {
        VoId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VoId {
    fn from(s: &str) -> Self {
        VoId(s.to_string())
    }
}

/// Logical file name: a location-independent, federation-wide identifier in
/// the form `mg://<origin-node>/<sop_uid>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lfn(pub String);

impl Lfn {
    pub fn new(origin: &NodeId, sop_uid: &str) -> Self {
        Lfn(format!("mg://{}/{}", origin.0, sop_uid))
    }

    /// Splits a well-formed LFN into origin node id and SOP instance UID.
    pub fn split(&self) -> Option<(NodeId, &str)> {
        let rest = self.0.strip_prefix("mg://")?;
        let (origin, sop) = rest.split_once('/')?;
        if origin.is_empty() || sop.is_empty() {
            return None;
        }
        Some((NodeId::new(origin), sop))
    }

    pub fn origin(&self) -> Option<NodeId> {
        self.split().map(|(o, _)| o)
    }

    pub fn sop_uid(&self) -> Option<&str> {
        self.split().map(|(_, s)| s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Lfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Lfn {
    fn from(s: &str) -> Self {
        Lfn(s.to_string())
    }
}

/// Physical file name: `DICOM://<host>:<port>:<aetitle>:<sopInstanceUid>`,
/// pointing a DICOM client at the node currently able to serve the bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pfn(pub String);

impl Pfn {
    pub fn render(host: &str, port: u16, aetitle: &str, sop_uid: &str) -> Self {
        Pfn(format!("DICOM://{host}:{port}:{aetitle}:{sop_uid}"))
    }

    /// Splits into (host, port, aetitle, sop_uid). The host part must not
    /// itself contain a colon.
    pub fn split(&self) -> Option<(&str, u16, &str, &str)> {
        let rest = self.0.strip_prefix("DICOM://")?;
        let mut parts = rest.splitn(4, ':');
        let host = parts.next()?;
        let port = parts.next()?.parse().ok()?;
        let aetitle = parts.next()?;
        let sop = parts.next()?;
        if host.is_empty() || aetitle.is_empty() || sop.is_empty() {
            return None;
        }
        Some((host, port, aetitle, sop))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Pfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
