/// Label of one of the four states spanning the zero-plus-one-excitation
/// subspace. The ordering is fixed: the zero-based [`slot`](Self::slot) of
/// each variant is its row/column in every [`Matrix4`](super::Matrix4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisIndex {
    /// `|1⟩ = |0⟩₁|0⟩₂|0⟩_c`
    Ground,
    /// `|2⟩ = |1⟩₁|0⟩₂|0⟩_c`
    Qubit1,
    /// `|3⟩ = |0⟩₁|0⟩₂|1⟩_c`
    Photon,
    /// `|4⟩ = |0⟩₁|1⟩₂|0⟩_c`
    Qubit2,
}

impl BasisIndex {
    pub const ALL: [BasisIndex; 4] = [
        BasisIndex::Ground,
        BasisIndex::Qubit1,
        BasisIndex::Photon,
        BasisIndex::Qubit2,
    ];

    /// Zero-based row/column.
    pub const fn slot(self) -> usize {
        match self {
            BasisIndex::Ground => 0,
            BasisIndex::Qubit1 => 1,
            BasisIndex::Photon => 2,
            BasisIndex::Qubit2 => 3,
        }
    }

    /// One-based label `1..=4`.
    pub const fn label(self) -> usize {
        self.slot() + 1
    }

    pub fn from_label(label: usize) -> Option<Self> {
        Self::ALL.get(label.checked_sub(1)?).copied()
    }

    /// Occupation `(qubit 1, qubit 2, photon)`.
    pub const fn occupation(self) -> (u8, u8, u8) {
        match self {
            BasisIndex::Ground => (0, 0, 0),
            BasisIndex::Qubit1 => (1, 0, 0),
            BasisIndex::Photon => (0, 0, 1),
            BasisIndex::Qubit2 => (0, 1, 0),
        }
    }
}
