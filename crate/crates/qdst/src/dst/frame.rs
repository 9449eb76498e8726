//! Frames of discernment and the Boolean indexing of their power set.
//!
//! A frame is an ordered list of mutually exclusive elements. Subsets of the
//! frame (the focal sets of a mass function) are addressed by an integer
//! index: element `k` (0-based) corresponds to bit `k`, so the first element
//! is the least-significant bit. Index 0 is the empty set and index
//! `2^n - 1` is the whole frame. Under this encoding set intersection,
//! union, complement and symmetric difference become the per-bit Boolean
//! operators `&`, `|`, `!` (masked) and `^`.

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hard limit on frame size: a mass function stores one `f64` per subset, so
/// 24 elements (16M subsets, 128 MiB) is already generous.
pub const MAX_FRAME_ELEMENTS: usize = 24;

/// An ordered frame of discernment.
///
/// Element order is significant: it fixes the bit ordering of subset indices
/// and the tie-breaking order of pignistic decisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    elements: Vec<String>,
}

impl Frame {
    /// Builds a frame from element labels.
    ///
    /// Labels must be non-empty, free of commas (they are joined by commas in
    /// file formats) and pairwise distinct.
    pub fn new<I, S>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if elements.len() > MAX_FRAME_ELEMENTS {
            return Err(Error::FrameTooLarge {
                got: elements.len(),
                max: MAX_FRAME_ELEMENTS,
            });
        }
        for (i, label) in elements.iter().enumerate() {
            if label.is_empty() || label.contains(',') {
                return Err(Error::InvalidElementLabel(label.clone()));
            }
            if elements[..i].contains(label) {
                return Err(Error::DuplicateElement(label.clone()));
            }
        }
        Ok(Self { elements })
    }

    /// Number of elements `n`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// True when the frame has exactly one element.
    pub fn is_empty(&self) -> bool {
        false // `new` rejects empty frames; kept for clippy's is_empty/len pairing
    }

    /// Element labels in bit order (index 0 = least-significant bit).
    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    /// Number of subsets, `2^n`.
    pub fn num_subsets(&self) -> usize {
        1 << self.elements.len()
    }

    /// Bit mask with every element set (the whole frame).
    pub fn full_mask(&self) -> usize {
        self.num_subsets() - 1
    }

    /// Position of a single element, if present.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    /// Subset index of a collection of element labels.
    ///
    /// Duplicates are rejected so that malformed subset labels do not pass
    /// silently.
    pub fn index_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        let mut index = 0usize;
        for label in labels {
            let label = label.as_ref();
            let pos = self
                .position(label)
                .ok_or_else(|| Error::UnknownElement(label.to_string()))?;
            if index >> pos & 1 == 1 {
                return Err(Error::DuplicateSubsetElement(label.to_string()));
            }
            index |= 1 << pos;
        }
        Ok(index)
    }

    /// Element labels of a subset index, in bit order.
    pub fn labels_of(&self, index: usize) -> Vec<&str> {
        debug_assert!(index < self.num_subsets());
        self.elements
            .iter()
            .enumerate()
            .filter(|(k, _)| index >> k & 1 == 1)
            .map(|(_, label)| label.as_str())
            .collect()
    }

    /// Canonical text form of a subset: lexicographically sorted labels
    /// joined by commas; the empty set is the empty string. This is the key
    /// format of mass files.
    pub fn subset_label(&self, index: usize) -> String {
        let mut labels = self.labels_of(index);
        labels.sort_unstable();
        labels.join(",")
    }

    /// Parses a `subset_label`-style string back into a subset index.
    pub fn parse_subset_label(&self, text: &str) -> Result<usize> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(0);
        }
        let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        self.index_of(&parts)
    }
}

// A frame serializes as its element list, e.g. `["a","b","c"]`.
impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.elements.len()))?;
        for e in &self.elements {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct FrameVisitor;
        impl<'de> Visitor<'de> for FrameVisitor {
            type Value = Frame;
            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a list of element labels")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Frame, A::Error> {
                let mut elements = Vec::new();
                while let Some(e) = seq.next_element::<String>()? {
                    elements.push(e);
                }
                Frame::new(elements).map_err(serde::de::Error::custom)
            }
        }
        deserializer.deserialize_seq(FrameVisitor)
    }
}
