//! Dyck words, their area, and prefix-height statistics.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Balanced 0/1 word, written most significant first (`"101100"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    word: Vec<bool>,
}

impl DyckPath {
    pub fn new(word: Vec<bool>) -> Result<Self> {
        let mut height: i64 = 0;
        for (pos, &up) in word.iter().enumerate() {
            height += if up { 1 } else { -1 };
            if height < 0 {
                return Err(Error::InvalidDyckWord(format!(
                    "{} dips below the diagonal at letter {}",
                    render(&word),
                    pos + 1
                )));
            }
        }
        if height != 0 {
            return Err(Error::InvalidDyckWord(format!("{} is unbalanced", render(&word))));
        }
        Ok(DyckPath { word })
    }

    pub fn letters(&self) -> &[bool] {
        &self.word
    }

    pub fn semilength(&self) -> usize {
        self.word.len() / 2
    }

    /// 1ⁿ0ⁿ.
    pub fn staircase_top(n: usize) -> Self {
        let mut word = vec![true; n];
        word.extend(std::iter::repeat_n(false, n));
        DyckPath { word }
    }
}

fn render(word: &[bool]) -> String {
    word.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.word))
    }
}

impl FromStr for DyckPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .trim()
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(Error::InvalidDyckWord(format!("letter {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(word)
    }
}

/// Unit boxes strictly between the path and the diagonal.
///
/// With up = (1,0) and down = (0,1), the down step leaving row y happens at
/// some x_y ≥ y + 1, and row y holds x_y − (y + 1) complete boxes above the
/// diagonal.
pub fn area(d: &DyckPath) -> usize {
    let mut x = 0usize;
    let mut y = 0usize;
    let mut total = 0usize;
    for &up in &d.word {
        if up {
            x += 1;
        } else {
            total += x - (y + 1);
            y += 1;
        }
    }
    total
}

/// Prefix statistics: `b[i]` is the height after letter i + 1, and `a[i]` is
/// the height right after the (i + 1)-th down step.
pub fn prefix_stats(d: &DyckPath) -> (Vec<usize>, Vec<i64>) {
    let mut a = Vec::with_capacity(d.semilength());
    let mut b = Vec::with_capacity(d.word.len());
    let mut h: i64 = 0;
    for &up in &d.word {
        h += if up { 1 } else { -1 };
        b.push(h);
        if !up {
            a.push(h as usize);
        }
    }
    (a, b)
}

/// Every Dyck word of semilength n, in decreasing lexicographic order (1 before 0).
pub fn enumerate_dyck(n: usize) -> Vec<DyckPath> {
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(2 * n);
    dyck_rec(n, 0, 0, &mut word, &mut out);
    out
}

fn dyck_rec(n: usize, ups: usize, downs: usize, word: &mut Vec<bool>, out: &mut Vec<DyckPath>) {
    if ups == n && downs == n {
        out.push(DyckPath { word: word.clone() });
        return;
    }
    if ups < n {
        word.push(true);
        dyck_rec(n, ups + 1, downs, word, out);
        word.pop();
    }
    if downs < ups {
        word.push(false);
        dyck_rec(n, ups, downs + 1, word, out);
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> DyckPath {
        s.parse().unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(area(&d("101010")), 0);
        assert_eq!(area(&d("101100")), 1);
        assert_eq!(area(&d("111000")), 3);
        assert_eq!(area(&d("")), 0);
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(prefix_stats(&d("1010")), (vec![0, 0], vec![1, 0, 1, 0]));
        assert_eq!(prefix_stats(&d("1100")), (vec![1, 0], vec![1, 2, 1, 0]));
        assert_eq!(prefix_stats(&d("111000")), (vec![2, 1, 0], vec![1, 2, 3, 2, 1, 0]));
    }

    #[test]
    fn invalid_words() {
        assert!(matches!("10".parse::<DyckPath>(), Ok(_)));
        assert!(matches!("01".parse::<DyckPath>(), Err(Error::InvalidDyckWord(_))));
        assert!(matches!("110".parse::<DyckPath>(), Err(Error::InvalidDyckWord(_))));
        assert!(matches!("1x".parse::<DyckPath>(), Err(Error::InvalidDyckWord(_))));
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (0..=7).map(|n| enumerate_dyck(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429]);
        assert_eq!(d("111000"), DyckPath::staircase_top(3));
    }
}
