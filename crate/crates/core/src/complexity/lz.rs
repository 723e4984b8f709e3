//! Exhaustive-history incremental parsing: each phrase is the shortest block
//! starting at its position that has not occurred earlier (overlaps allowed).

use crate::numeric::BitWord;

/// Suffix automaton over `{0, 1}`, extended one symbol at a time.
struct SuffixAutomaton {
    next: Vec<[u32; 2]>,
    link: Vec<u32>,
    len: Vec<u32>,
    last: u32,
}

const NONE: u32 = u32::MAX;

impl SuffixAutomaton {
    fn with_capacity(n: usize) -> Self {
        let mut sam = SuffixAutomaton {
            next: Vec::with_capacity(2 * n + 1),
            link: Vec::with_capacity(2 * n + 1),
            len: Vec::with_capacity(2 * n + 1),
            last: 0,
        };
        sam.push_state(0, NONE);
        sam
    }

    fn push_state(&mut self, len: u32, link: u32) -> u32 {
        self.next.push([NONE, NONE]);
        self.link.push(link);
        self.len.push(len);
        (self.len.len() - 1) as u32
    }

    fn extend(&mut self, b: usize) {
        let cur = self.push_state(self.len[self.last as usize] + 1, 0);
        let mut p = self.last;
        while p != NONE && self.next[p as usize][b] == NONE {
            self.next[p as usize][b] = cur;
            p = self.link[p as usize];
        }
        if p != NONE {
            let q = self.next[p as usize][b];
            if self.len[p as usize] + 1 == self.len[q as usize] {
                self.link[cur as usize] = q;
            } else {
                let clone = self.push_state(self.len[p as usize] + 1, self.link[q as usize]);
                self.next[clone as usize] = self.next[q as usize];
                while p != NONE && self.next[p as usize][b] == q {
                    self.next[p as usize][b] = clone;
                    p = self.link[p as usize];
                }
                self.link[q as usize] = clone;
                self.link[cur as usize] = clone;
            }
        }
        self.last = cur;
    }
}

/// Start positions of the phrases of `w`; the last phrase may be incomplete.
pub fn phrase_starts(w: &BitWord) -> Vec<usize> {
    let bits = w.bits();
    let mut sam = SuffixAutomaton::with_capacity(bits.len());
    let mut starts = Vec::new();
    // state and length of the current phrase w[start..j) as a substring of w[..j)
    let mut state = 0u32;
    let mut matched = 0u32;
    for (j, &bit) in bits.iter().enumerate() {
        if matched == 0 {
            starts.push(j);
        }
        let b = bit as usize;
        let step = sam.next[state as usize][b];
        sam.extend(b);
        if step == NONE {
            state = 0;
            matched = 0;
        } else {
            state = step;
            matched += 1;
            // a clone may now hold the shorter strings of `state`
            while sam.link[state as usize] != NONE && sam.len[sam.link[state as usize] as usize] >= matched {
                state = sam.link[state as usize];
            }
        }
    }
    starts
}

/// Phrase count of `w`.
pub fn phrase_count(w: &BitWord) -> usize {
    phrase_starts(w).len()
}

/// Phrase counts of every prefix `w[..d]` for `d` in `depths`. The parse of a
/// prefix is the full parse cut at `d`, so one pass serves all depths.
pub fn prefix_phrase_counts(w: &BitWord, depths: &[usize]) -> Vec<usize> {
    let starts = phrase_starts(w);
    depths.iter().map(|&d| starts.partition_point(|&s| s < d)).collect()
}

/// `⌈log₂ m⌉` for `m ≥ 1`.
fn ceil_log2(m: u64) -> u64 {
    (64 - (m - 1).leading_zeros()) as u64
}

/// Description length charged for `c` phrases: `c·(⌈log₂(c+1)⌉ + 1)`.
pub fn phrase_bits(c: usize) -> u64 {
    let c = c as u64;
    c * (ceil_log2(c + 1) + 1)
}

/// Upper-bound proxy for the prefix-free complexity of `w`, in bits.
pub fn lz_complexity(w: &BitWord) -> u64 {
    phrase_bits(phrase_count(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn textbook_parse() {
        // 0·001·10·100·1000·101
        let x = w("0001101001000101");
        assert_eq!(phrase_starts(&x), vec![0, 1, 4, 6, 9, 13]);
    }

    #[test]
    fn unary_and_empty() {
        assert_eq!(phrase_count(&BitWord::zeros(1024)), 2);
        assert!(lz_complexity(&BitWord::zeros(1024)) <= 200);
        assert_eq!(lz_complexity(&BitWord::new()), 0);
    }

    #[test]
    fn bit_cost() {
        assert_eq!(phrase_bits(0), 0);
        assert_eq!(phrase_bits(1), 2);
        assert_eq!(phrase_bits(3), 9);
        assert_eq!(phrase_bits(4), 16);
    }

    #[test]
    fn prefix_counts_agree_with_reparsing() {
        let x = w("0110100110010110100101100110100110010110011010010110");
        let depths: Vec<usize> = (0..=x.len()).collect();
        let counts = prefix_phrase_counts(&x, &depths);
        for d in depths {
            assert_eq!(counts[d], phrase_count(&x.prefix(d)), "d={d}");
        }
    }
}
