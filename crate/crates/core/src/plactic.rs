//! Schensted insertion and plactic normal forms.

use crate::error::{Error, Result};

/// Insertion tableau of `w`, rows top to bottom.
pub fn insertion_tableau(w: &[u8]) -> Vec<Vec<u8>> {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for &letter in w {
        let mut x = letter;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let row = &mut rows[r];
            match row.iter().position(|&y| y > x) {
                Some(k) => {
                    std::mem::swap(&mut row[k], &mut x);
                    r += 1;
                }
                None => {
                    row.push(x);
                    break;
                }
            }
        }
    }
    rows
}

/// Row reading word (bottom row first) of the insertion tableau of `w`.
pub fn rsk_normal_form(w: &[u8]) -> Vec<u8> {
    insertion_tableau(w).into_iter().rev().flatten().collect()
}

/// As [`rsk_normal_form`], rejecting letters outside `alphabet`.
pub fn rsk_checked(alphabet: &[u8], w: &[u8]) -> Result<Vec<u8>> {
    if let Some(x) = w.iter().find(|x| !alphabet.contains(x)) {
        return Err(Error::NotComposable(format!("letter {x} is not in the alphabet {alphabet:?}")));
    }
    Ok(rsk_normal_form(w))
}

/// All words of length `len` over `alphabet`, in lexicographic order.
pub fn words(alphabet: &[u8], len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn knuth_pairs_share_normal_forms() {
        assert_eq!(rsk_normal_form(&[1, 2, 1]), rsk_normal_form(&[2, 1, 1]));
        assert_eq!(rsk_normal_form(&[2, 1, 2]), rsk_normal_form(&[2, 2, 1]));
        assert_eq!(rsk_normal_form(&[1, 2, 1]), vec![2, 1, 1]);
    }

    #[test]
    fn six_classes_in_length_three() {
        let forms: BTreeSet<Vec<u8>> = words(&[1, 2], 3).iter().map(|w| rsk_normal_form(w)).collect();
        assert_eq!(forms.len(), 6);
    }

    #[test]
    fn idempotent_and_checked() {
        for w in words(&[1, 2, 3], 4) {
            let n = rsk_normal_form(&w);
            assert_eq!(rsk_normal_form(&n), n);
        }
        assert!(rsk_checked(&[1, 2], &[1, 3]).is_err());
    }
}
