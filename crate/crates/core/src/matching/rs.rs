//! Robinson–Schensted style bijection between perfect matchings of [2n] and
//! oscillating tableaux from ∅ to ∅ of length 2n.
//!
//! Reading a tableau left to right, a partial standard filling is kept. An
//! added box receives the current time. A removed box gives up its entry,
//! which is reverse row inserted through the rows above; whatever leaves the
//! top row is the opener paired with the current time. The inverse runs time
//! backwards with ordinary row insertion.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tableau::{OscillatingTableau, Step};

use super::PerfectMatching;

type Filling = Vec<Vec<usize>>;

fn shape_of(filling: &Filling) -> Partition {
    Partition::new(filling.iter().map(Vec::len).collect()).expect("filling rows stay weakly decreasing")
}

fn require_closed(t: &OscillatingTableau) -> Result<()> {
    if !t.start().is_empty() || !t.shape().is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "expected a walk from ∅ to ∅, got {} to {}",
            t.start(),
            t.shape()
        )));
    }
    Ok(())
}

/// The matching M with RS(M) = T.
pub fn tableau_to_matching(t: &OscillatingTableau) -> Result<PerfectMatching> {
    require_closed(t)?;
    let mut filling: Filling = Vec::new();
    let mut pairs = Vec::with_capacity(t.length() / 2);
    for (idx, step) in t.moves().into_iter().enumerate() {
        let time = idx + 1;
        match step {
            Step::Add(r) => {
                if r == filling.len() {
                    filling.push(Vec::new());
                }
                filling[r].push(time);
            }
            Step::Remove(r) => {
                let mut v = filling[r].pop().expect("removable row is nonempty");
                if filling[r].is_empty() {
                    filling.pop();
                }
                for row in filling[..r].iter_mut().rev() {
                    let smaller = row.partition_point(|&x| x < v);
                    // the entry directly above the vacated cell is smaller than v
                    debug_assert!(smaller > 0);
                    std::mem::swap(&mut row[smaller - 1], &mut v);
                }
                pairs.push((v, time));
            }
        }
    }
    PerfectMatching::new(pairs)
}

/// RS(M): the oscillating tableau whose reverse bumping yields M.
pub fn matching_to_tableau(m: &PerfectMatching) -> Result<OscillatingTableau> {
    let size = 2 * m.n();
    let mut filling: Filling = Vec::new();
    let mut shapes = Vec::with_capacity(size + 1);
    shapes.push(Partition::empty());
    for time in (1..=size).rev() {
        let partner = m.partner(time);
        if partner < time {
            row_insert(&mut filling, partner);
        } else {
            remove_corner_entry(&mut filling, time)?;
        }
        shapes.push(shape_of(&filling));
    }
    shapes.reverse();
    OscillatingTableau::new(shapes)
}

fn row_insert(filling: &mut Filling, mut v: usize) {
    for row in filling.iter_mut() {
        let pos = row.partition_point(|&x| x < v);
        if pos == row.len() {
            row.push(v);
            return;
        }
        std::mem::swap(&mut row[pos], &mut v);
    }
    filling.push(vec![v]);
}

fn remove_corner_entry(filling: &mut Filling, entry: usize) -> Result<()> {
    let r = filling
        .iter()
        .position(|row| row.last() == Some(&entry))
        .ok_or_else(|| Error::Internal(format!("opener {entry} is not at the end of a row")))?;
    let below = filling.get(r + 1).map_or(0, Vec::len);
    if below >= filling[r].len() {
        return Err(Error::Internal(format!("opener {entry} does not sit in a removable corner")));
    }
    filling[r].pop();
    if filling[r].is_empty() {
        filling.pop();
    }
    Ok(())
}
