use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wwl_core::group_algebra::GroupAlgebraElement;
use wwl_core::hecke::{m_direct_row, m_product, Fp, SpectralPoint};
use wwl_core::shellability::{
    census_exhaustive, census_fast, condition_b, is_good_word, s_set, Census, WordLabels,
};
use wwl_core::whittaker::{
    atom_coeffs, casselman_shalika_check, char_coeffs, closed_form_coeff, test_weights,
    ConditionForm,
};
use wwl_core::{ElemId, Error, RootSystem, WeightVector, WeylGroup};

use crate::config::{Format, SweepConfig};
use crate::output::{csv_line, pct_hundredths, render_pct, word_field, Histogram};
use crate::{CliError, Report};

/// Groups at least this large need `--large` for `stats`.
pub const LARGE_ORDER: usize = 500;

/// Elements per checkpoint in `--large` sweeps.
const CHECKPOINT_CHUNK: usize = 32;

pub fn group_for(cfg: &SweepConfig) -> Result<WeylGroup, CliError> {
    let rs = RootSystem::new(cfg.type_letter, cfg.rank)?;
    Ok(WeylGroup::new(&rs)?)
}

fn element(g: &WeylGroup, letters: &[usize]) -> Result<ElemId, CliError> {
    Ok(g.from_word(letters)?)
}

fn header(g: &WeylGroup, command: &str) -> serde_json::Map<String, Value> {
    let rs = g.root_system();
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("type".into(), json!(rs.type_letter().to_string()));
    m.insert("rank".into(), json!(rs.rank()));
    m.insert("order".into(), json!(g.order()));
    m
}

fn word_json(g: &WeylGroup, x: ElemId) -> Value {
    json!(g.word(x))
}

// ---------------------------------------------------------------- verify

#[derive(Default)]
struct VerifyPart {
    triples: u64,
    pairs: u64,
    pairs_satisfying: u64,
    violations: Vec<Value>,
    deodhar: Vec<Value>,
    ab_mismatch: Vec<Value>,
}

fn verify_element(g: &WeylGroup, w: ElemId) -> VerifyPart {
    let mut part = VerifyPart::default();
    let words = g.reduced_words(w);
    for x in g.lower_interval(w) {
        part.pairs += 1;
        let (mut exists_a, mut exists_b) = (false, false);
        for word in &words {
            part.triples += 1;
            let labels = WordLabels::compute(g, x, word).expect("x <= w");
            let flags = labels.flags();
            exists_a |= flags.i;
            exists_b |= flags.ii;
            if !flags.agree() {
                part.violations.push(json!({
                    "x": word_json(g, x),
                    "word": word.letters(),
                    "lambda": labels.lambda,
                    "plus": labels.plus,
                    "minus": labels.minus,
                    "flags": flags,
                }));
            }
        }
        if exists_a {
            part.pairs_satisfying += 1;
        }
        if exists_a != exists_b {
            part.ab_mismatch
                .push(json!({"x": word_json(g, x), "w": word_json(g, w)}));
        }
        let s = s_set(g, x, w).expect("x <= w").len();
        if s < g.length(w) - g.length(x) {
            part.deodhar
                .push(json!({"x": word_json(g, x), "w": word_json(g, w), "s": s}));
        }
    }
    part
}

pub fn verify_conjecture(cfg: &SweepConfig, g: &WeylGroup) -> Result<Report, CliError> {
    let counts = g.reduced_word_counts();
    let mut spent = 0u64;
    let mut todo = Vec::new();
    for w in g.ids() {
        let cost = counts[w.idx()] * g.below_set(w).count_ones(..) as u64;
        if spent + cost > cfg.budget {
            break;
        }
        spent += cost;
        todo.push(w);
    }
    let complete = todo.len() == g.order();
    let parts: Vec<VerifyPart> = todo.par_iter().map(|&w| verify_element(g, w)).collect();

    let mut total = VerifyPart::default();
    for p in parts {
        total.triples += p.triples;
        total.pairs += p.pairs;
        total.pairs_satisfying += p.pairs_satisfying;
        total.violations.extend(p.violations);
        total.deodhar.extend(p.deodhar);
        total.ab_mismatch.extend(p.ab_mismatch);
    }
    let failed =
        !(total.violations.is_empty() && total.deodhar.is_empty() && total.ab_mismatch.is_empty());

    let mut m = header(g, "verify-conjecture");
    m.insert("complete".into(), json!(complete));
    m.insert("elements_checked".into(), json!(todo.len()));
    m.insert("triples".into(), json!(total.triples));
    m.insert("pairs".into(), json!(total.pairs));
    m.insert("pairs_satisfying".into(), json!(total.pairs_satisfying));
    m.insert("violation_count".into(), json!(total.violations.len()));
    m.insert("violations".into(), Value::Array(total.violations.clone()));
    m.insert(
        "deodhar_violations".into(),
        Value::Array(total.deodhar.clone()),
    );
    m.insert(
        "condition_a_b_mismatches".into(),
        Value::Array(total.ab_mismatch.clone()),
    );
    if !complete {
        m.insert(
            "note".into(),
            json!(format!(
                "budget of {} triples exhausted after {} of {} elements",
                cfg.budget,
                todo.len(),
                g.order()
            )),
        );
    }

    let csv = [
        csv_line(&[
            "type",
            "rank",
            "triples",
            "violations",
            "deodhar_violations",
            "complete",
        ]),
        csv_line(&[
            &g.root_system().type_letter().to_string(),
            &cfg.rank.to_string(),
            &total.triples.to_string(),
            &total.violations.len().to_string(),
            &total.deodhar.len().to_string(),
            &complete.to_string(),
        ]),
    ]
    .concat();
    let code = if failed {
        2
    } else if !complete {
        3
    } else {
        0
    };
    Ok(Report::new(Value::Object(m), csv, code))
}

// ---------------------------------------------------------------- stats

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub w: Vec<usize>,
    pub n_leq: usize,
    pub n_cond: usize,
}

impl StatsRow {
    pub fn pct(&self) -> String {
        render_pct(pct_hundredths(self.n_cond, self.n_leq))
    }
}

#[derive(Serialize, Deserialize)]
struct ProgressHeader {
    #[serde(rename = "type")]
    type_letter: String,
    rank: usize,
    method: String,
}

fn census(g: &WeylGroup, w: ElemId, exhaustive: bool) -> StatsRow {
    let Census { n_leq, n_cond } = if exhaustive {
        census_exhaustive(g, w)
    } else {
        census_fast(g, w)
    };
    StatsRow {
        w: g.word(w).to_vec(),
        n_leq,
        n_cond,
    }
}

fn progress_path(cfg: &SweepConfig, g: &WeylGroup, method: &str) -> PathBuf {
    let dir = cfg.cache.clone().unwrap_or_else(|| PathBuf::from("."));
    let rs = g.root_system();
    dir.join(format!(
        "stats-{}{}-{method}.progress.jsonl",
        rs.type_letter(),
        rs.rank()
    ))
}

/// Runs the sweep in chunks, appending finished rows to a progress file and
/// skipping rows already present there.
fn checkpointed_rows(
    cfg: &SweepConfig,
    g: &WeylGroup,
    method: &str,
) -> Result<Vec<StatsRow>, CliError> {
    let path = progress_path(cfg, g, method);
    let header = ProgressHeader {
        type_letter: g.root_system().type_letter().to_string(),
        rank: cfg.rank,
        method: method.to_string(),
    };
    let mut rows: Vec<StatsRow> = Vec::new();
    if let Ok(file) = fs::File::open(&path) {
        let mut lines = BufReader::new(file).lines();
        let ok_header = lines
            .next()
            .and_then(|l| l.ok())
            .and_then(|l| serde_json::from_str::<ProgressHeader>(&l).ok())
            .is_some_and(|h| {
                h.type_letter == header.type_letter
                    && h.rank == header.rank
                    && h.method == header.method
            });
        if ok_header {
            // a torn last line is dropped and recomputed
            rows.extend(
                lines
                    .map_while(|l| l.ok())
                    .map_while(|l| serde_json::from_str(&l).ok()),
            );
        }
    }
    // rewrite what survived so later appends never follow a torn line
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(CliError::io)?;
    }
    let mut f = fs::File::create(&path).map_err(CliError::io)?;
    writeln!(f, "{}", serde_json::to_string(&header).expect("header")).map_err(CliError::io)?;
    for row in &rows {
        writeln!(f, "{}", serde_json::to_string(row).expect("row")).map_err(CliError::io)?;
    }
    drop(f);
    let done: std::collections::HashSet<Vec<usize>> = rows.iter().map(|r| r.w.clone()).collect();
    let pending: Vec<ElemId> = g.ids().filter(|&w| !done.contains(g.word(w))).collect();
    let exhaustive = cfg.exhaustive;
    for chunk in pending.chunks(CHECKPOINT_CHUNK) {
        let fresh: Vec<StatsRow> = chunk
            .par_iter()
            .map(|&w| census(g, w, exhaustive))
            .collect();
        let mut f = OpenOptions::new()
            .append(true)
            .open(&path)
            .map_err(CliError::io)?;
        for row in &fresh {
            writeln!(f, "{}", serde_json::to_string(row).expect("row")).map_err(CliError::io)?;
        }
        f.sync_data().map_err(CliError::io)?;
        rows.extend(fresh);
    }
    Ok(rows)
}

pub fn stats_rows(cfg: &SweepConfig, g: &WeylGroup) -> Result<Vec<StatsRow>, CliError> {
    let method = if cfg.exhaustive { "exhaustive" } else { "fast" };
    let mut rows = if cfg.large {
        checkpointed_rows(cfg, g, method)?
    } else {
        let ids: Vec<ElemId> = g.ids().collect();
        ids.par_iter()
            .map(|&w| census(g, w, cfg.exhaustive))
            .collect()
    };
    rows.sort_by(|a, b| a.w.cmp(&b.w));
    Ok(rows)
}

pub fn stats(cfg: &SweepConfig, g: &WeylGroup) -> Result<Report, CliError> {
    if g.order() >= LARGE_ORDER && !cfg.large {
        return Err(CliError::budget(format!(
            "group of order {} needs --large (threshold {LARGE_ORDER})",
            g.order()
        )));
    }
    let rows = stats_rows(cfg, g)?;
    let hist = Histogram::from_counts(rows.iter().map(|r| (r.n_cond, r.n_leq)));

    let mut m = header(g, "stats");
    m.insert(
        "method".into(),
        json!(if cfg.exhaustive { "exhaustive" } else { "fast" }),
    );
    m.insert(
        "rows".into(),
        Value::Array(
            rows.iter()
                .map(|r| json!({"w": r.w, "n_leq": r.n_leq, "n_cond": r.n_cond, "pct": r.pct()}))
                .collect(),
        ),
    );
    m.insert("histogram".into(), hist.to_json());
    m.insert("mode_bin".into(), json!(hist.mode_label()));
    m.insert("mode_is_top_bin".into(), json!(hist.mode_is_top()));
    m.insert("q3".into(), json!(render_pct(hist.q3_hundredths())));
    m.insert("q3_is_100".into(), json!(hist.q3_hundredths() == 10_000));
    m.insert("q3_definition".into(), json!("nearest rank ceil(0.75 N)"));

    let type_s = g.root_system().type_letter().to_string();
    let rank_s = cfg.rank.to_string();
    let mut csv = csv_line(&["type", "rank", "w", "n_leq", "n_cond", "pct"]);
    for r in &rows {
        csv.push_str(&csv_line(&[
            &type_s,
            &rank_s,
            &word_field(&r.w),
            &r.n_leq.to_string(),
            &r.n_cond.to_string(),
            &r.pct(),
        ]));
    }
    Ok(Report::new(Value::Object(m), csv, 0))
}

// ---------------------------------------------------------------- coeff

fn element_json(f: &GroupAlgebraElement) -> Value {
    serde_json::to_value(f).expect("element serializes")
}

pub fn coeff(cfg: &SweepConfig, g: &WeylGroup) -> Result<Report, CliError> {
    let letters = cfg
        .w
        .clone()
        .map(|w| w.0)
        .ok_or_else(|| CliError::input("coeff needs --w".into()))?;
    let (word, w) = g.reduced_word(&letters)?;
    let xs = match &cfg.x {
        Some(xw) => {
            let x = element(g, &xw.0)?;
            if !g.leq(x, w) {
                return Err(Error::NotBelow {
                    x: g.word(x).to_vec(),
                    w: letters.clone(),
                }
                .into());
            }
            vec![x]
        }
        None => g.lower_interval(w),
    };
    let table = atom_coeffs(g, &word)?;
    let chars = cfg.chars.then(|| char_coeffs(g, &table));

    let mut entries = Vec::new();
    let mut csv = csv_line(&["x", "condition", "closed_form_agrees", "value"]);
    for &x in &xs {
        let c = table.get(x).expect("x <= w");
        let closed = match closed_form_coeff(g, x, &word, ConditionForm::A) {
            Ok(f) => Some(f),
            Err(Error::ConditionFails { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let agrees = closed.as_ref().map(|f| f == c);
        let mut e = serde_json::Map::new();
        e.insert("x".into(), word_json(g, x));
        e.insert("value".into(), element_json(c));
        e.insert("text".into(), json!(c.to_string()));
        e.insert(
            "condition".into(),
            json!(if closed.is_some() { "holds" } else { "fails" }),
        );
        e.insert(
            "closed_form".into(),
            closed.as_ref().map_or(Value::Null, element_json),
        );
        e.insert("closed_form_agrees".into(), json!(agrees));
        if let Some(ch) = &chars {
            e.insert("char".into(), element_json(ch.get(x).expect("x <= w")));
        }
        csv.push_str(&csv_line(&[
            &word_field(g.word(x)),
            if closed.is_some() { "holds" } else { "fails" },
            &agrees.map_or(String::new(), |a| a.to_string()),
            &c.to_string(),
        ]));
        entries.push(Value::Object(e));
    }
    let disagreements = entries
        .iter()
        .filter(|e| e["closed_form_agrees"] == json!(false))
        .count();

    let mut m = header(g, "coeff");
    m.insert("w".into(), json!(letters));
    m.insert("coeffs".into(), Value::Array(entries));
    m.insert(
        "vanishing".into(),
        Value::Array(
            table
                .vanishing()
                .into_iter()
                .map(|x| word_json(g, x))
                .collect(),
        ),
    );
    Ok(Report::new(
        Value::Object(m),
        csv,
        if disagreements > 0 { 2 } else { 0 },
    ))
}

// ---------------------------------------------------------------- mtx

/// Point `k` comes from its own ChaCha stream under the root seed.
pub fn spectral_points(
    rs: &RootSystem,
    seed: u64,
    n: usize,
) -> Result<Vec<SpectralPoint>, CliError> {
    (0..n)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            Ok(SpectralPoint::sample(rs, &mut rng)?)
        })
        .collect()
}

struct MtxColumn {
    entries: Vec<Value>,
    csv: String,
    violations: usize,
    condition_pairs: usize,
}

fn mtx_column(g: &WeylGroup, w: ElemId, points: &[SpectralPoint]) -> Result<MtxColumn, Error> {
    let rows: Vec<Vec<Fp>> = points
        .iter()
        .map(|pt| m_direct_row(g, w, pt))
        .collect::<Result<_, _>>()?;
    let mut col = MtxColumn {
        entries: Vec::new(),
        csv: String::new(),
        violations: 0,
        condition_pairs: 0,
    };
    for x in g.ids() {
        let values: Vec<Fp> = rows.iter().map(|r| r[x.idx()]).collect();
        let below = g.leq(x, w);
        let witness = if below { condition_b(g, x, w)? } else { None };
        let agree = match &witness {
            Some(word) => {
                col.condition_pairs += 1;
                let mut all = true;
                for (pt, v) in points.iter().zip(&values) {
                    all &= m_product(g, x, word, pt)? == *v;
                }
                Some(all)
            }
            None => None,
        };
        let shape_ok = if x == w {
            values.iter().all(|&v| v == Fp::ONE)
        } else if !below {
            values.iter().all(|v| v.is_zero())
        } else {
            true
        };
        if !shape_ok || agree == Some(false) {
            col.violations += 1;
        }
        let v0 = values.first().map_or(String::new(), |v| v.to_string());
        col.entries.push(json!({
            "x": word_json(g, x),
            "w": word_json(g, w),
            "points": points.len(),
            "condition": witness.is_some(),
            "witness": witness.as_ref().map(|r| r.letters().to_vec()),
            "agree": agree,
            "value_at_point0": v0,
        }));
        col.csv.push_str(&csv_line(&[
            &word_field(g.word(x)),
            &word_field(g.word(w)),
            &v0,
            &witness.is_some().to_string(),
            &agree.map_or(String::new(), |a| a.to_string()),
        ]));
    }
    Ok(col)
}

pub fn mtx(cfg: &SweepConfig, g: &WeylGroup) -> Result<Report, CliError> {
    let points = spectral_points(g.root_system(), cfg.seed, cfg.points)?;
    let ids: Vec<ElemId> = g.ids().collect();
    let cols: Vec<MtxColumn> = ids
        .par_iter()
        .map(|&w| mtx_column(g, w, &points))
        .collect::<Result<_, _>>()?;

    let mut m = header(g, "mtx");
    m.insert("points".into(), json!(cfg.points));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert(
        "modulus".into(),
        json!(wwl_core::hecke::MODULUS.to_string()),
    );
    let violations: usize = cols.iter().map(|c| c.violations).sum();
    m.insert("violations".into(), json!(violations));
    m.insert(
        "condition_pairs".into(),
        json!(cols.iter().map(|c| c.condition_pairs).sum::<usize>()),
    );
    let mut csv = csv_line(&["x", "w", "value_at_point0", "condition", "agree"]);
    let mut entries = Vec::new();
    for c in cols {
        entries.extend(c.entries);
        csv.push_str(&c.csv);
    }
    m.insert("entries".into(), Value::Array(entries));
    Ok(Report::new(
        Value::Object(m),
        csv,
        if violations > 0 { 2 } else { 0 },
    ))
}

// ---------------------------------------------------------------- cs-check

pub fn cs_check(cfg: &SweepConfig, g: &WeylGroup) -> Result<Report, CliError> {
    let weights = match &cfg.lambda {
        Some(l) => {
            if l.len() != cfg.rank {
                return Err(CliError::input(format!(
                    "--lambda needs {} coordinates",
                    cfg.rank
                )));
            }
            vec![WeightVector::new(l.clone())]
        }
        None => test_weights(cfg.rank, 3, cfg.seed),
    };
    let mut results = Vec::new();
    let mut csv = csv_line(&["lambda", "holds"]);
    let mut all = true;
    for lam in &weights {
        let holds = casselman_shalika_check(g, lam)?;
        all &= holds;
        results.push(json!({"lambda": lam.coords, "holds": holds}));
        csv.push_str(&csv_line(&[
            &word_field_i32(&lam.coords),
            &holds.to_string(),
        ]));
    }
    let mut m = header(g, "cs-check");
    m.insert("results".into(), Value::Array(results));
    m.insert("all_hold".into(), json!(all));
    Ok(Report::new(Value::Object(m), csv, if all { 0 } else { 2 }))
}

fn word_field_i32(v: &[i32]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------- good-words

pub fn good_words(_cfg: &SweepConfig, g: &WeylGroup) -> Result<Report, CliError> {
    let ids: Vec<ElemId> = g.ids().collect();
    let per_w: Vec<Vec<(ElemId, ElemId, bool)>> = ids
        .par_iter()
        .map(|&w| {
            let words = g.reduced_words(w);
            g.lower_interval(w)
                .into_iter()
                .filter(|&x| s_set(g, x, w).expect("x <= w").len() == g.length(w) - g.length(x))
                .map(|x| {
                    let good = words
                        .iter()
                        .any(|word| is_good_word(g, x, word).expect("x <= w"));
                    (x, w, good)
                })
                .collect()
        })
        .collect();
    let pairs: Vec<(ElemId, ElemId, bool)> = per_w.into_iter().flatten().collect();
    let without = pairs.iter().filter(|p| !p.2).count();

    let mut m = header(g, "good-words");
    m.insert("qualifying".into(), json!(pairs.len()));
    m.insert("without_good_word".into(), json!(without));
    m.insert(
        "pairs".into(),
        Value::Array(
            pairs
                .iter()
                .map(|&(x, w, good)| json!({"x": word_json(g, x), "w": word_json(g, w), "has_good_word": good}))
                .collect(),
        ),
    );
    let mut csv = csv_line(&["x", "w", "has_good_word"]);
    for &(x, w, good) in &pairs {
        csv.push_str(&csv_line(&[
            &word_field(g.word(x)),
            &word_field(g.word(w)),
            &good.to_string(),
        ]));
    }
    Ok(Report::new(Value::Object(m), csv, 0))
}

pub fn format_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => report.csv.clone(),
    }
}
