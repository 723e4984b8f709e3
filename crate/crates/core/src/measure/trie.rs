use std::io::BufRead;

use crate::error::{Error, Result};
use crate::numeric::BitWord;

#[derive(Clone, Debug, Default)]
pub(crate) struct Node {
    /// Child indices; 0 means absent (the root is never a child).
    pub(crate) child: [u32; 2],
    /// The whole cylinder below this node belongs to the set.
    pub(crate) terminal: bool,
    pub(crate) depth: u32,
}

/// A finite union of cylinders, kept as an antichain in a binary trie.
#[derive(Clone, Debug)]
pub struct CylinderTrie {
    pub(crate) nodes: Vec<Node>,
    max_depth: usize,
}

impl CylinderTrie {
    pub fn new(max_depth: usize) -> Self {
        CylinderTrie { nodes: vec![Node::default()], max_depth }
    }

    /// Builds a trie whose maximum depth is the longest word (or `max_depth` if given).
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a BitWord>, max_depth: Option<usize>) -> Result<Self> {
        let words: Vec<&BitWord> = words.into_iter().collect();
        let deepest = words.iter().map(|w| w.len()).max().unwrap_or(0);
        let mut trie = CylinderTrie::new(max_depth.unwrap_or(deepest));
        for w in words {
            trie.insert(w)?;
        }
        Ok(trie)
    }

    /// Reads one word per line; blank lines and `#` comments are skipped.
    pub fn read(input: impl BufRead, max_depth: Option<usize>) -> Result<Self> {
        let mut words = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            words.push(line.parse::<BitWord>()?);
        }
        Self::from_words(&words, max_depth)
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn is_empty(&self) -> bool {
        let root = &self.nodes[0];
        !root.terminal && root.child == [0, 0]
    }

    /// Adds the cylinder `[w]`. Words already covered are ignored; words
    /// covering stored ones replace them.
    pub fn insert(&mut self, w: &BitWord) -> Result<()> {
        if w.len() > self.max_depth {
            return Err(Error::WordTooDeep(w.to_string()));
        }
        let mut at = 0usize;
        for (d, &b) in w.bits().iter().enumerate() {
            if self.nodes[at].terminal {
                return Ok(());
            }
            let next = self.nodes[at].child[b as usize];
            at = if next == 0 {
                self.nodes.push(Node { child: [0, 0], terminal: false, depth: d as u32 + 1 });
                let id = self.nodes.len() - 1;
                self.nodes[at].child[b as usize] = id as u32;
                id
            } else {
                next as usize
            };
        }
        let node = &mut self.nodes[at];
        node.terminal = true;
        node.child = [0, 0];
        Ok(())
    }

    /// The stored antichain in lexicographic order.
    pub fn words(&self) -> Vec<BitWord> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, BitWord::new())];
        while let Some((at, w)) = stack.pop() {
            let node = &self.nodes[at];
            if node.terminal {
                out.push(w);
                continue;
            }
            for b in [true, false] {
                let c = node.child[b as usize];
                if c != 0 {
                    stack.push((c as usize, w.child(b)));
                }
            }
        }
        out
    }

    /// Whether the set contains every extension of `w` (i.e. `[w]` is inside).
    pub fn contains_cylinder(&self, w: &BitWord) -> bool {
        let mut at = 0usize;
        for &b in w.bits() {
            if self.nodes[at].terminal {
                return true;
            }
            at = self.nodes[at].child[b as usize] as usize;
            if at == 0 {
                return false;
            }
        }
        self.nodes[at].terminal
    }

    pub fn union(&self, other: &CylinderTrie) -> Result<CylinderTrie> {
        let words: Vec<BitWord> = self.words().into_iter().chain(other.words()).collect();
        Self::from_words(&words, Some(self.max_depth.max(other.max_depth)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn keeps_an_antichain() {
        let mut t = CylinderTrie::new(6);
        t.insert(&w("0101")).unwrap();
        t.insert(&w("0110")).unwrap();
        t.insert(&w("01")).unwrap();
        t.insert(&w("011")).unwrap();
        t.insert(&w("11")).unwrap();
        assert_eq!(t.words(), vec![w("01"), w("11")]);
        assert!(t.contains_cylinder(&w("0111")));
        assert!(!t.contains_cylinder(&w("0")));
    }

    #[test]
    fn rejects_deep_words() {
        let mut t = CylinderTrie::new(2);
        assert_eq!(t.insert(&w("010")), Err(Error::WordTooDeep("010".into())));
    }

    #[test]
    fn reads_lines() {
        let t = CylinderTrie::read("0000\n# note\n\n1111\n".as_bytes(), None).unwrap();
        assert_eq!(t.max_depth(), 4);
        assert_eq!(t.words(), vec![w("0000"), w("1111")]);
        assert!(CylinderTrie::new(3).is_empty());
    }
}
