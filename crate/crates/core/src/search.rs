//! Randomized search in trace space for pairs whose spectrum-maximizing
//! products are a chiral pair.
//!
//! A sample is a 5-tuple `(x, y, z, u, v)`. Tuples that no real pair
//! realizes are dropped. The rest are screened: the best chiral target must
//! strictly beat every other isospectrality class of short products, judged
//! purely from Fricke polynomials. Survivors are realized as matrices and
//! handed to the polytope certifier.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::table_rows;
use crate::error::{Error, Result};
use crate::fricke::{dedup_with_polynomials, fricke_polynomial, quadratic_root_modulus};
use crate::mat2::{realizable, realize, Tuple5};
use crate::poly::{CompiledPoly, Poly5, PowerTable};
use crate::polytope::{best_other_product, certify, Verdict};
use crate::words::{chiral_pairs, lyndon_words, mirror, Word};

/// Normalized spectral radii closer than this (relative) count as a tie.
pub const TIE_TOL: f64 = 1e-12;
/// Allowed deviation in vertex pairs when comparing with the published table.
pub const TABLE_VERTEX_TOL: usize = 4;
/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "JSRFORGE_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n_samples: u64,
    pub max_word_len: usize,
    pub target_chirals_max_len: usize,
    pub seed: u64,
    /// Sampling intervals for `x, y, z, u, v`.
    pub ranges: [(f64, f64); 5],
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            n_samples: 1_000_000,
            max_word_len: 14,
            target_chirals_max_len: 9,
            seed: 0,
            ranges: [(-10.0, 10.0), (-10.0, 10.0), (-100.0, 100.0), (-10.0, 10.0), (-10.0, 10.0)],
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
        }
        if self.max_word_len == 0 || self.target_chirals_max_len == 0 {
            return Err(Error::InvalidArgument("word lengths must be positive".into()));
        }
        for (lo, hi) in self.ranges {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidArgument(format!("bad sampling range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// The tuple drawn for `index`. Each index has its own generator stream,
    /// so the draw does not depend on evaluation order.
    pub fn sample(&self, index: u64) -> Tuple5 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let mut draw = |(lo, hi): (f64, f64)| rng.random_range(lo..hi);
        let [x, y, z, u, v] = self.ranges.map(&mut draw);
        Tuple5 { x, y, z, u, v }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum CandidateStatus {
    Screened,
    Realized,
    Certified,
    Rejected(String),
}

impl fmt::Display for CandidateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateStatus::Screened => write!(f, "screened"),
            CandidateStatus::Realized => write!(f, "realized"),
            CandidateStatus::Certified => write!(f, "certified"),
            CandidateStatus::Rejected(r) => write!(f, "rejected: {r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub sample_index: u64,
    pub tuple: Tuple5,
    pub best_word: Word,
    pub best_normalized_rho: f64,
    /// Lead of `best_word` over the best product of any other class.
    pub runner_up_gap: f64,
    pub status: CandidateStatus,
    /// Vertex pairs of the invariant polygon, when certified.
    pub vertex_pairs: Option<usize>,
}

struct Entry {
    word: Word,
    poly: Poly5,
    compiled: CompiledPoly,
    counts: (i32, i32),
}

/// Isospectrality-class representatives with compiled Fricke polynomials,
/// shortest words first.
pub struct ScreenList {
    entries: Vec<Entry>,
    max_exp: usize,
}

impl ScreenList {
    /// One entry per distinct Fricke polynomial among `words`.
    pub fn new(words: &[Word]) -> ScreenList {
        let mut entries: Vec<Entry> = dedup_with_polynomials(words)
            .into_iter()
            .map(|(word, poly)| {
                let (na, nb) = word.letter_counts();
                Entry { compiled: poly.compile(), word, poly, counts: (na as i32, nb as i32) }
            })
            .collect();
        entries.sort_by_key(|e| e.word.len());
        let max_exp = entries.iter().map(|e| e.compiled.max_exponent()).max().unwrap_or(0);
        ScreenList { entries, max_exp }
    }

    /// Lyndon words up to `max_len`, deduplicated by Fricke polynomial.
    pub fn standard(max_len: usize) -> Result<ScreenList> {
        Ok(ScreenList::new(&lyndon_words(max_len)?))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.entries.iter().map(|e| &e.word)
    }

    fn rho(e: &Entry, t: &Tuple5, powers: &PowerTable) -> f64 {
        let trace = e.compiled.eval_with_powers(powers);
        let delta = t.u.powi(e.counts.0) * t.v.powi(e.counts.1);
        quadratic_root_modulus(trace, delta).powf(1.0 / e.word.len() as f64)
    }
}

fn is_tie_or_better(other: f64, target: f64) -> bool {
    other >= target - TIE_TOL * target.abs().max(1.0)
}

/// A target word prepared for screening.
pub struct Target {
    word: Word,
    poly: Poly5,
    entry: Entry,
}

impl Target {
    pub fn new(word: &Word) -> Target {
        let poly = fricke_polynomial(word);
        let (na, nb) = word.letter_counts();
        let entry = Entry {
            word: word.clone(),
            poly: poly.clone(),
            compiled: poly.compile(),
            counts: (na as i32, nb as i32),
        };
        Target { word: word.clone(), poly, entry }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }
}

fn power_table(t: &Tuple5, list: &ScreenList, targets: &[Target]) -> PowerTable {
    let max = targets
        .iter()
        .map(|t| t.entry.compiled.max_exponent())
        .fold(list.max_exp, usize::max);
    PowerTable::new(t, max)
}

/// Screening with a single target: accepts iff the target's normalized
/// spectral radius at `t` strictly beats every class of `list` other than
/// its own. Stops at the first defeater.
pub fn screen(t: &Tuple5, target: &Word, list: &ScreenList) -> bool {
    let target = Target::new(target);
    let powers = power_table(t, list, std::slice::from_ref(&target));
    screen_prepared(t, &target, list, &powers)
}

fn screen_prepared(t: &Tuple5, target: &Target, list: &ScreenList, powers: &PowerTable) -> bool {
    let value = ScreenList::rho(&target.entry, t, powers);
    if !value.is_finite() {
        return false;
    }
    list.entries
        .iter()
        .filter(|e| e.poly != target.poly)
        .all(|e| !is_tie_or_better(ScreenList::rho(e, t, powers), value))
}

/// Best other class value at `t` (full scan).
fn runner_up(t: &Tuple5, target: &Target, list: &ScreenList, powers: &PowerTable) -> f64 {
    list.entries
        .iter()
        .filter(|e| e.poly != target.poly)
        .map(|e| ScreenList::rho(e, t, powers))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// One representative of each chiral pair with words up to `max_len`.
pub fn default_targets(max_len: usize) -> Result<Vec<Word>> {
    Ok(chiral_pairs(max_len)?.into_iter().map(|(w, _)| w).collect())
}

/// Screens `t` against all targets. Only the best target can pass, and a tie
/// between two targets of different classes rejects.
fn screen_sample(index: u64, t: &Tuple5, targets: &[Target], list: &ScreenList) -> Option<CandidateRecord> {
    let powers = power_table(t, list, targets);
    let mut best: Option<(usize, f64)> = None;
    let mut tied = false;
    for (k, target) in targets.iter().enumerate() {
        let r = ScreenList::rho(&target.entry, t, &powers);
        match best {
            Some((j, b)) if targets[j].poly != target.poly && is_tie_or_better(r, b) && is_tie_or_better(b, r) => {
                tied = true;
                if r > b {
                    best = Some((k, r));
                }
            }
            Some((_, b)) if r > b => {
                tied = false;
                best = Some((k, r));
            }
            None => best = Some((k, r)),
            _ => {}
        }
    }
    let (k, value) = best?;
    if tied || !screen_prepared(t, &targets[k], list, &powers) {
        return None;
    }
    let gap = value - runner_up(t, &targets[k], list, &powers);
    Some(CandidateRecord {
        sample_index: index,
        tuple: *t,
        best_word: targets[k].word.clone(),
        best_normalized_rho: value,
        runner_up_gap: gap,
        status: CandidateStatus::Screened,
        vertex_pairs: None,
    })
}

/// Realizes and certifies a screened candidate with the chiral pair
/// `[w, mirror(w)]`.
fn confirm(mut rec: CandidateRecord) -> CandidateRecord {
    let (a, b) = match realize(&rec.tuple) {
        Ok(p) => p,
        Err(e) => {
            rec.status = CandidateStatus::Rejected(e.to_string());
            return rec;
        }
    };
    rec.status = CandidateStatus::Realized;
    let cert = certify(&a, &b, &[rec.best_word.clone(), mirror(&rec.best_word)]);
    match cert.verdict {
        Verdict::Failed { reason } => rec.status = CandidateStatus::Rejected(reason),
        _ => {
            rec.status = CandidateStatus::Certified;
            rec.vertex_pairs = Some(cert.polygon.half_len());
        }
    }
    rec
}

/// Counts and candidates of one search run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub targets: Vec<Word>,
    pub samples: u64,
    pub realizable: u64,
    pub records: Vec<CandidateRecord>,
}

impl SearchReport {
    pub fn screened(&self) -> usize {
        self.records.len()
    }

    pub fn certified(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.status == CandidateStatus::Certified)
            .count()
    }

    /// Candidate table with columns `sample_index, x, y, z, u, v, best_word,
    /// normalized_rho, gap, status`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output: {e}"));
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record([
            "sample_index", "x", "y", "z", "u", "v", "best_word", "normalized_rho", "gap", "status",
        ])
        .map_err(io)?;
        for r in &self.records {
            let t = r.tuple;
            wtr.write_record([
                r.sample_index.to_string(),
                t.x.to_string(),
                t.y.to_string(),
                t.z.to_string(),
                t.u.to_string(),
                t.v.to_string(),
                r.best_word.to_exponent_string(),
                r.best_normalized_rho.to_string(),
                r.runner_up_gap.to_string(),
                r.status.to_string(),
            ])
            .map_err(io)?;
        }
        wtr.flush().map_err(|e| Error::InvalidArgument(format!("csv output: {e}")))?;
        Ok(())
    }
}

/// Worker count from `JSRFORGE_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

pub fn run_search(cfg: &SearchConfig, targets: &[Word]) -> Result<SearchReport> {
    run_search_with(cfg, targets, |i| cfg.sample(i))
}

/// [`run_search`] with the sampler replaced, for injecting known tuples.
pub fn run_search_with(
    cfg: &SearchConfig,
    targets: &[Word],
    sampler: impl Fn(u64) -> Tuple5 + Sync,
) -> Result<SearchReport> {
    cfg.validate()?;
    if targets.is_empty() {
        return Err(Error::InvalidArgument("no target words".into()));
    }
    let list = ScreenList::standard(cfg.max_word_len)?;
    let prepared: Vec<Target> = targets.iter().map(Target::new).collect();
    let (realizable_count, records) = pool()?.install(|| {
        let realizable_count = (0..cfg.n_samples)
            .into_par_iter()
            .filter(|&i| realizable(&sampler(i)))
            .count() as u64;
        let records: Vec<CandidateRecord> = (0..cfg.n_samples)
            .into_par_iter()
            .filter_map(|i| {
                let t = sampler(i);
                if !realizable(&t) {
                    return None;
                }
                screen_sample(i, &t, &prepared, &list)
            })
            .map(confirm)
            .collect();
        (realizable_count, records)
    });
    Ok(SearchReport {
        config: cfg.clone(),
        targets: targets.to_vec(),
        samples: cfg.n_samples,
        realizable: realizable_count,
        records,
    })
}

/// Brute-force check of a certified candidate: no primitive product of
/// length at most `max_len` of the realized pair has a larger normalized
/// spectral radius than the candidate (up to `tol`).
pub fn brute_force_confirms(rec: &CandidateRecord, max_len: usize, tol: f64) -> Result<bool> {
    let (a, b) = realize(&rec.tuple)?;
    let exclude = [rec.best_word.clone(), mirror(&rec.best_word)];
    let own = crate::mat2::normalized_spectral_radius(&rec.best_word, &a, &b);
    Ok(match best_other_product(&a, &b, max_len, &exclude) {
        Some((_, r)) => r <= own + tol,
        None => true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub row: usize,
    pub smp: Word,
    pub tuple: Tuple5,
    pub screen_ok: bool,
    pub verdict: Option<Verdict>,
    pub vertex_pairs: Option<usize>,
    pub table_n: usize,
    pub pass: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let got = r.vertex_pairs.map_or("-".to_string(), |n| n.to_string());
            writeln!(
                f,
                "row {} {:<10} n={:<3} got={:<3} {} {}",
                r.row + 1,
                r.smp.to_exponent_string(),
                r.table_n,
                got,
                if r.pass { "PASS" } else { "FAIL" },
                r.note
            )?;
        }
        Ok(())
    }
}

/// Screen, realize and certify every row of the published table of chiral
/// SMP tuples. A failing row is reported and the run continues.
pub fn reproduce_table() -> Result<TableReport> {
    let list = ScreenList::standard(14)?;
    let rows = table_rows()
        .into_par_iter()
        .enumerate()
        .map(|(i, row)| {
            let smp: Word = row.smp.parse().expect("table words parse");
            let mut rep = RowReport {
                row: i,
                smp: smp.clone(),
                tuple: row.tuple,
                screen_ok: screen(&row.tuple, &smp, &list),
                verdict: None,
                vertex_pairs: None,
                table_n: row.n,
                pass: false,
                note: String::new(),
            };
            if !rep.screen_ok {
                rep.note = "screen: another class is at least as good".into();
                return rep;
            }
            let (a, b) = match realize(&row.tuple) {
                Ok(p) => p,
                Err(e) => {
                    rep.note = e.to_string();
                    return rep;
                }
            };
            let cert = certify(&a, &b, &[smp.clone(), mirror(&smp)]);
            if let Verdict::Failed { reason } = &cert.verdict {
                rep.note = reason.clone();
            } else {
                let n = cert.polygon.half_len();
                rep.vertex_pairs = Some(n);
                rep.pass = n.abs_diff(row.n) <= TABLE_VERTEX_TOL;
                if !rep.pass {
                    rep.note = format!("vertex pairs differ by more than {TABLE_VERTEX_TOL}");
                }
            }
            rep.verdict = Some(cert.verdict);
            rep
        })
        .collect();
    Ok(TableReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    fn list() -> ScreenList {
        ScreenList::standard(14).unwrap()
    }

    #[test]
    fn standard_list_size() {
        assert_eq!(list().len(), 1549);
    }

    #[test]
    fn table_row_one_screens() {
        let t = Tuple5::new(3.38477, -0.84501, 5.58856, 4.29803, 5.99245);
        let l = list();
        assert!(screen(&t, &w("a2b2ab"), &l));
        // same class via the mirror of a²bab²
        assert!(screen(&t, &w("a2bab2"), &l));
        assert!(!screen(&t, &w("ab"), &l));
    }

    #[test]
    fn near_commuting_tuple_rejects() {
        assert!(!screen(&Tuple5::new(2.0, 2.0, 2.0, 1.0, 1.0), &w("a2bab2"), &list()));
    }

    #[test]
    fn zero_determinants_are_handled() {
        let t = Tuple5::new(1.0, 0.5, 3.0, 0.0, 0.0);
        // no panic, and a finite decision
        let _ = screen(&t, &w("a2bab2"), &list());
        assert!(!screen(&Tuple5::new(0.0, 0.0, 0.0, 0.0, 0.0), &w("a2bab2"), &list()));
    }

    #[test]
    fn sampling_is_order_independent() {
        let cfg = SearchConfig { seed: 7, ..Default::default() };
        let forward: Vec<Tuple5> = (0..50).map(|i| cfg.sample(i)).collect();
        let backward: Vec<Tuple5> = (0..50).rev().map(|i| cfg.sample(i)).collect();
        assert!(forward.iter().eq(backward.iter().rev()));
        assert_ne!(forward[0], forward[1]);
        let t = forward[0];
        assert!(t.z.abs() <= 100.0 && t.x.abs() <= 10.0);
    }

    #[test]
    fn default_targets_count() {
        assert_eq!(default_targets(9).unwrap().len(), 23);
    }

    #[test]
    fn injected_table_tuple_certifies() {
        let t = Tuple5::new(3.38477, -0.84501, 5.58856, 4.29803, 5.99245);
        let cfg = SearchConfig { n_samples: 1, ..Default::default() };
        let rep = run_search_with(&cfg, &default_targets(9).unwrap(), |_| t).unwrap();
        assert_eq!(rep.records.len(), 1);
        let r = &rep.records[0];
        assert_eq!(r.status, CandidateStatus::Certified, "{:?}", r.status);
        assert!(r.best_word.is_rotation_of(&w("a2b2ab")) || mirror(&r.best_word).is_rotation_of(&w("a2b2ab")));
        assert!(r.runner_up_gap > 0.0);
        assert!(brute_force_confirms(r, 10, 1e-9).unwrap());
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = SearchConfig { n_samples: 0, ..Default::default() };
        assert!(run_search(&cfg, &[w("a2bab2")]).is_err());
        let mut cfg = SearchConfig::default();
        cfg.ranges[2] = (1.0, 1.0);
        assert!(cfg.validate().is_err());
    }
}
