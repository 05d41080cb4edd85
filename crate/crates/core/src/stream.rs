//! The sample stream, its consumption counter, and the register file that
//! holds every piece of mutable estimator state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::Pmf;
use crate::error::{Error, Result};

/// Random source owned by a single trial.
pub type RandomSource = ChaCha8Rng;

/// Register budget the streaming estimators must fit in.
pub const WORD_BUDGET: usize = 20;

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum Source<'a> {
    Iid { pmf: &'a Pmf, rng: RandomSource },
    Replay { symbols: Vec<usize>, pos: usize },
}

/// Single-pass, pull-based stream of symbols with an exact draw counter.
#[derive(Debug, Clone)]
pub struct SymbolStream<'a> {
    source: Source<'a>,
    consumed: u64,
}

impl<'a> SymbolStream<'a> {
    /// I.i.d. draws from `pmf`.
    pub fn new(pmf: &'a Pmf, rng: RandomSource) -> Self {
        Self {
            source: Source::Iid { pmf, rng },
            consumed: 0,
        }
    }

    pub fn seeded(pmf: &'a Pmf, seed: u64) -> Self {
        Self::new(pmf, RandomSource::seed_from_u64(seed))
    }

    /// Replays a fixed symbol sequence. Panics once the sequence runs out.
    pub fn replay(symbols: Vec<usize>) -> SymbolStream<'static> {
        SymbolStream {
            source: Source::Replay { symbols, pos: 0 },
            consumed: 0,
        }
    }

    /// Number of samples drawn so far.
    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    #[inline]
    pub fn next_symbol(&mut self) -> usize {
        self.consumed += 1;
        match &mut self.source {
            Source::Iid { pmf, rng } => pmf.sample(rng),
            Source::Replay { symbols, pos } => {
                let x = *symbols
                    .get(*pos)
                    .unwrap_or_else(|| panic!("replay stream exhausted after {pos} symbols"));
                *pos += 1;
                x
            }
        }
    }
}

impl Iterator for SymbolStream<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        Some(self.next_symbol())
    }
}

/// Draws `n` fresh samples and returns how many equal `x`. Uses two
/// registers: the loop counter and the match counter.
pub fn count_in_window(
    stream: &mut SymbolStream<'_>,
    x: usize,
    n: u64,
    rf: &mut RegisterFile,
) -> Result<u64> {
    let j = rf.alloc_int(0)?;
    let hits = match rf.alloc_int(0) {
        Ok(r) => r,
        Err(e) => {
            rf.free(j);
            return Err(e);
        }
    };
    while rf.int(j) < n {
        if stream.next_symbol() == x {
            rf.incr(hits);
        }
        rf.incr(j);
    }
    let count = rf.int(hits);
    rf.free(hits);
    rf.free(j);
    Ok(count)
}

/// Content of one register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Word {
    Int(u64),
    Real(f64),
}

/// Handle to a live register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reg(usize);

/// Fixed-capacity scratchpad. One register models one memory word.
///
/// Allocating past capacity is an error; `high_water` records the largest
/// number of simultaneously live registers.
#[derive(Debug, Clone)]
pub struct RegisterFile {
    cells: Vec<Option<Word>>,
    live: usize,
    high_water: usize,
}

impl Default for RegisterFile {
    fn default() -> Self {
        Self::new(WORD_BUDGET)
    }
}

impl RegisterFile {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "register file needs at least one register");
        Self {
            cells: vec![None; capacity],
            live: 0,
            high_water: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.cells.len()
    }

    pub fn live(&self) -> usize {
        self.live
    }

    pub fn high_water(&self) -> usize {
        self.high_water
    }

    pub fn alloc(&mut self, init: Word) -> Result<Reg> {
        let slot = self
            .cells
            .iter()
            .position(Option::is_none)
            .ok_or(Error::CapacityExceeded {
                capacity: self.cells.len(),
            })?;
        self.cells[slot] = Some(init);
        self.live += 1;
        self.high_water = self.high_water.max(self.live);
        Ok(Reg(slot))
    }

    pub fn alloc_int(&mut self, init: u64) -> Result<Reg> {
        self.alloc(Word::Int(init))
    }

    pub fn alloc_real(&mut self, init: f64) -> Result<Reg> {
        self.alloc(Word::Real(init))
    }

    pub fn free(&mut self, reg: Reg) {
        assert!(self.cells[reg.0].take().is_some(), "double free of {reg:?}");
        self.live -= 1;
    }

    #[inline]
    pub fn read(&self, reg: Reg) -> Word {
        self.cells[reg.0].unwrap_or_else(|| panic!("read of freed {reg:?}"))
    }

    #[inline]
    pub fn write(&mut self, reg: Reg, word: Word) {
        let cell = &mut self.cells[reg.0];
        assert!(cell.is_some(), "write to freed {reg:?}");
        *cell = Some(word);
    }

    #[inline]
    pub fn int(&self, reg: Reg) -> u64 {
        match self.read(reg) {
            Word::Int(v) => v,
            Word::Real(_) => panic!("{reg:?} holds a real"),
        }
    }

    #[inline]
    pub fn real(&self, reg: Reg) -> f64 {
        match self.read(reg) {
            Word::Real(v) => v,
            Word::Int(_) => panic!("{reg:?} holds an integer"),
        }
    }

    #[inline]
    pub fn set_int(&mut self, reg: Reg, v: u64) {
        self.write(reg, Word::Int(v));
    }

    #[inline]
    pub fn set_real(&mut self, reg: Reg, v: f64) {
        self.write(reg, Word::Real(v));
    }

    #[inline]
    pub fn incr(&mut self, reg: Reg) {
        let v = self.int(reg);
        self.set_int(reg, v + 1);
    }

    #[inline]
    pub fn add_real(&mut self, reg: Reg, v: f64) {
        let cur = self.real(reg);
        self.set_real(reg, cur + v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Family, FamilySpec};

    #[test]
    fn dirac_stream_counts_draws() {
        let p = FamilySpec::new(Family::Dirac, 3).materialize().unwrap();
        let mut s = SymbolStream::seeded(&p, 1);
        let xs: Vec<usize> = (0..5).map(|_| s.next_symbol()).collect();
        assert_eq!(xs, vec![0; 5]);
        assert_eq!(s.consumed(), 5);
    }

    #[test]
    fn window_counts() {
        let p = FamilySpec::new(Family::Dirac, 3).materialize().unwrap();
        let mut s = SymbolStream::seeded(&p, 1);
        let mut rf = RegisterFile::default();
        assert_eq!(count_in_window(&mut s, 0, 0, &mut rf).unwrap(), 0);
        assert_eq!(s.consumed(), 0);
        assert_eq!(count_in_window(&mut s, 0, 7, &mut rf).unwrap(), 7);
        assert_eq!(s.consumed(), 7);
        assert_eq!(rf.live(), 0);
        assert_eq!(rf.high_water(), 2);
    }

    #[test]
    fn fair_coin_window() {
        let p = FamilySpec::new(Family::Uniform, 2).materialize().unwrap();
        let mut s = SymbolStream::seeded(&p, 99);
        let mut rf = RegisterFile::default();
        let c = count_in_window(&mut s, 0, 100_000, &mut rf).unwrap();
        assert!((49_300..=50_700).contains(&c), "{c}");
        assert_eq!(s.consumed(), 100_000);
    }

    #[test]
    fn window_counts_partition_the_window() {
        let p = FamilySpec::new(Family::Zipf { s: 1.0 }, 6)
            .materialize()
            .unwrap();
        let base = SymbolStream::seeded(&p, 4);
        let mut rf = RegisterFile::default();
        let total: u64 = (0..6)
            .map(|x| count_in_window(&mut base.clone(), x, 1000, &mut rf).unwrap())
            .sum();
        assert_eq!(total, 1000);
    }

    #[test]
    fn replay_stream() {
        let mut s = SymbolStream::replay(vec![1, 0, 1]);
        assert_eq!(s.by_ref().take(3).collect::<Vec<_>>(), vec![1, 0, 1]);
        assert_eq!(s.consumed(), 3);
    }

    #[test]
    fn capacity_is_enforced() {
        let mut rf = RegisterFile::new(20);
        for _ in 0..20 {
            rf.alloc_int(0).unwrap();
        }
        assert_eq!(
            rf.alloc_int(0),
            Err(Error::CapacityExceeded { capacity: 20 })
        );
        assert_eq!(rf.high_water(), 20);
    }

    #[test]
    fn high_water_semantics() {
        let mut rf = RegisterFile::new(20);
        let a = rf.alloc_int(1).unwrap();
        rf.alloc_int(2).unwrap();
        rf.alloc_real(3.0).unwrap();
        rf.free(a);
        let d = rf.alloc_real(0.5).unwrap();
        assert_eq!(rf.high_water(), 3);
        assert_eq!(rf.live(), 3);
        rf.add_real(d, 0.25);
        assert_eq!(rf.real(d), 0.75);
    }

    #[test]
    fn window_failure_releases_registers() {
        let p = FamilySpec::new(Family::Dirac, 2).materialize().unwrap();
        let mut s = SymbolStream::seeded(&p, 1);
        let mut rf = RegisterFile::new(1);
        assert!(count_in_window(&mut s, 0, 3, &mut rf).is_err());
        assert_eq!(rf.live(), 0);
    }
}
