use super::schedule::TreeSchedule;
use crate::error::{Error, Result};
use crate::numeric::BitWord;

impl TreeSchedule {
    /// True iff every forced position within `w` holds 0.
    pub fn membership(&self, w: &BitWord) -> Result<bool> {
        self.first_violation(w).map(|v| v.is_none())
    }

    fn first_violation(&self, w: &BitWord) -> Result<Option<u64>> {
        let len = w.len() as u64;
        if len > self.depth() {
            return Err(Error::ScheduleTooShort { len, limit: self.depth() });
        }
        for n in 0..self.blocks() {
            let from = self.forced_start(n).min(len);
            let to = self.l[n + 1].min(len);
            if let Some(p) = (from..to).find(|&p| w.bit(p as usize)) {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// Places the bits of `x` into free positions in order, writing 0 at
    /// forced positions. The output ends right after the last bit of `x`,
    /// extended through any forced run that directly follows it.
    pub fn dilute(&self, x: &BitWord) -> Result<BitWord> {
        let need = x.len() as u64;
        if need > self.total_free() {
            return Err(Error::ScheduleTooShort { len: need, limit: self.total_free() });
        }
        let mut out = BitWord::new();
        let mut used = 0usize;
        for n in 0..self.blocks() {
            if used == x.len() {
                break;
            }
            let take = (self.c[n] as usize).min(x.len() - used);
            for k in 0..take {
                out.push(x.bit(used + k));
            }
            used += take;
            if take == self.c[n] as usize {
                let forced = self.l[n + 1] - self.forced_start(n);
                for _ in 0..forced {
                    out.push(false);
                }
            }
        }
        Ok(out)
    }

    /// Reads back the bits at free positions.
    pub fn undilute(&self, b: &BitWord) -> Result<BitWord> {
        if let Some(p) = self.first_violation(b)? {
            return Err(Error::NotInTree(p));
        }
        let bits = (0..b.len()).filter(|&p| self.is_free(p as u64)).map(|p| b.bit(p)).collect();
        Ok(BitWord::from_bits(bits))
    }
}
