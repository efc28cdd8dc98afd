//! 3-colorings of a group and rainbow AP(3) detection.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{gcd, FiniteAbelianGroup, GroupElement};
use crate::subset::GroupSubset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Color {
    A = 0,
    B = 1,
    C = 2,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::A, Color::B, Color::C];

    pub fn from_index(i: u8) -> Option<Color> {
        Self::ALL.get(i as usize).copied()
    }

    pub fn as_char(self) -> char {
        match self {
            Color::A => 'A',
            Color::B => 'B',
            Color::C => 'C',
        }
    }

    pub fn from_char(c: char) -> Option<Color> {
        match c {
            'A' => Some(Color::A),
            'B' => Some(Color::B),
            'C' => Some(Color::C),
            _ => None,
        }
    }

    /// The two labels other than `self`, in `A, B, C` order.
    pub fn others(self) -> [Color; 2] {
        match self {
            Color::A => [Color::B, Color::C],
            Color::B => [Color::A, Color::C],
            Color::C => [Color::A, Color::B],
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An ordered triple `(x, y, z)` with `x + y = 2z`, by element index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RainbowTriple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl RainbowTriple {
    pub fn elements(&self, group: &FiniteAbelianGroup) -> Result<[GroupElement; 3]> {
        Ok([
            group.element_at(self.x)?,
            group.element_at(self.y)?,
            group.element_at(self.z)?,
        ])
    }
}

/// A total assignment of the labels `A, B, C` to the elements of a group.
#[derive(Clone, PartialEq, Eq)]
pub struct ThreeColoring {
    group: FiniteAbelianGroup,
    labels: Vec<Color>,
}

impl ThreeColoring {
    pub fn new(group: &FiniteAbelianGroup, labels: Vec<Color>) -> Result<Self> {
        if labels.len() != group.order() {
            return Err(Error::Precondition(format!(
                "coloring has {} labels but the group has order {}",
                labels.len(),
                group.order()
            )));
        }
        Ok(ThreeColoring {
            group: group.clone(),
            labels,
        })
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl FnMut(usize) -> Color) -> Self {
        ThreeColoring {
            group: group.clone(),
            labels: (0..group.order()).map(f).collect(),
        }
    }

    /// Colors `a` with A, `b` with B and everything else with C.
    pub fn from_classes(a: &GroupSubset, b: &GroupSubset) -> Result<Self> {
        if a.group() != b.group() {
            return Err(Error::ParentMismatch);
        }
        if !a.is_disjoint(b) {
            return Err(Error::Precondition("classes A and B overlap".into()));
        }
        Ok(Self::from_fn(a.group(), |x| {
            if a.contains(x) {
                Color::A
            } else if b.contains(x) {
                Color::B
            } else {
                Color::C
            }
        }))
    }

    /// Parses a label string such as `"ABCAAB"`.
    pub fn parse_labels(group: &FiniteAbelianGroup, s: &str) -> Result<Self> {
        let labels = s
            .trim()
            .chars()
            .map(|c| Color::from_char(c).ok_or_else(|| Error::Parse(format!("bad label {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, labels)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn labels(&self) -> &[Color] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, x: usize) -> Color {
        self.labels[x]
    }

    pub fn label_string(&self) -> String {
        self.labels.iter().map(|c| c.as_char()).collect()
    }

    pub fn class_set(&self, color: Color) -> GroupSubset {
        GroupSubset::from_predicate(&self.group, |x| self.labels[x] == color)
    }

    pub fn class_sizes(&self) -> [usize; 3] {
        let mut sizes = [0; 3];
        for &c in &self.labels {
            sizes[c as usize] += 1;
        }
        sizes
    }

    pub fn min_class_size(&self) -> usize {
        *self.class_sizes().iter().min().expect("three classes")
    }

    pub fn has_nonempty_classes(&self) -> bool {
        self.class_sizes().iter().all(|&s| s > 0)
    }

    /// First rainbow triple in lexicographic `(x, z)` order, with `y = 2z - x`.
    pub fn find_rainbow_ap3(&self) -> Option<RainbowTriple> {
        let g = &self.group;
        let n = g.order();
        for x in 0..n {
            let cx = self.labels[x];
            for z in 0..n {
                let cz = self.labels[z];
                if cz == cx {
                    continue;
                }
                let y = g.sub_idx(g.double_idx(z), x);
                let cy = self.labels[y];
                if cy != cx && cy != cz {
                    return Some(RainbowTriple { x, y, z });
                }
            }
        }
        None
    }

    pub fn is_rainbow_free(&self) -> bool {
        self.find_rainbow_ap3().is_none()
    }

    /// `c'(x) = c(x + g)`.
    pub fn translate(&self, g: usize) -> Self {
        Self::from_fn(&self.group, |x| self.labels[self.group.add_idx(x, g)])
    }

    /// `c'(x) = c(u·x)` for a unit `u`.
    pub fn dilate(&self, u: i64) -> Result<Self> {
        let n = self.group.order();
        if gcd(u.rem_euclid(n.max(1) as i64) as u64, n as u64) != 1 {
            return Err(Error::NonUnit { u, n });
        }
        Ok(Self::from_fn(&self.group, |x| {
            self.labels[self.group.scalar_mul_idx(u, x)]
        }))
    }

    /// Relabels with `perm[old as usize] = new`.
    pub fn permute_labels(&self, perm: [Color; 3]) -> Self {
        ThreeColoring {
            group: self.group.clone(),
            labels: self.labels.iter().map(|&c| perm[c as usize]).collect(),
        }
    }

    /// Two-line file form: `group: n1,n2,...` then the label string.
    pub fn to_file_string(&self) -> String {
        format!("group: {}\n{}\n", self.group.literal(), self.label_string())
    }

    pub fn from_file_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty coloring file".into()))?;
        let spec = header.strip_prefix("group:").ok_or_else(|| {
            Error::Parse(format!("expected \"group: ...\" header, got {header:?}"))
        })?;
        let group: FiniteAbelianGroup = spec.trim().parse()?;
        let labels = lines
            .next()
            .ok_or_else(|| Error::Parse("missing label line".into()))?;
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
        }
        Self::parse_labels(&group, labels)
    }
}

impl fmt::Debug for ThreeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ThreeColoring({}: {})",
            self.group.literal(),
            self.label_string()
        )
    }
}

impl fmt::Display for ThreeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label_string())
    }
}
