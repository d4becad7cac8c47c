//! Stable item identifiers: `C<n>` for claims, `D<n>` for definitions,
//! `T<n>` for theorems, `F<n>` for follow-up work items.

use std::fmt;

/// The four kinds of item a document can declare by stable ID.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ItemKind {
    Claim,
    Definition,
    Theorem,
    FollowUp,
}

impl ItemKind {
    /// The ID prefix letter for this kind.
    pub fn prefix(self) -> char {
        match self {
            ItemKind::Claim => 'C',
            ItemKind::Definition => 'D',
            ItemKind::Theorem => 'T',
            ItemKind::FollowUp => 'F',
        }
    }

    /// The kind encoded by an ID's prefix letter, if the ID is well-formed.
    pub fn of(id: &str) -> Option<ItemKind> {
        if !is_item_id(id) {
            return None;
        }
        match id.as_bytes()[0] {
            b'C' => Some(ItemKind::Claim),
            b'D' => Some(ItemKind::Definition),
            b'T' => Some(ItemKind::Theorem),
            b'F' => Some(ItemKind::FollowUp),
            _ => None,
        }
    }
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ItemKind::Claim => "claim",
            ItemKind::Definition => "definition",
            ItemKind::Theorem => "theorem",
            ItemKind::FollowUp => "follow-up",
        };
        f.write_str(name)
    }
}

/// True when `id` matches `(C|D|T|F)[0-9]+` exactly.
pub fn is_item_id(id: &str) -> bool {
    let bytes = id.as_bytes();
    if bytes.len() < 2 {
        return false;
    }
    matches!(bytes[0], b'C' | b'D' | b'T' | b'F') && bytes[1..].iter().all(u8::is_ascii_digit)
}

/// True when `id` matches `C[0-9]+` exactly.
pub fn is_claim_id(id: &str) -> bool {
    is_item_id(id) && id.starts_with('C')
}

/// True when `id` matches `F[0-9]+` exactly.
pub fn is_followup_id(id: &str) -> bool {
    is_item_id(id) && id.starts_with('F')
}
