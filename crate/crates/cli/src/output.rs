//! Rendering in text, JSON and CSV.

use std::io::{self, Write};

use clap::ValueEnum;
use rfdual_core::harness::{CoeffReport, SuiteResult};
use rfdual_core::rfseries::PairingResult;
use rfdual_core::TruncatedSumReport;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        <Format as ValueEnum>::from_str(s, true).map_err(|_| format!("unknown format `{s}` (expected text, json or csv)"))
    }
}

fn json<W: Write, T: Serialize>(w: &mut W, v: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)
}

fn csv_rows<W: Write>(w: &mut W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(header)?;
    for r in rows {
        c.write_record(r)?;
    }
    c.flush()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn csum<W: Write>(w: &mut W, f: Format, q: u64, n: u64, c: i64) -> io::Result<()> {
    match f {
        Format::Text => writeln!(w, "{c}"),
        Format::Json => json(w, &serde_json::json!({ "q": q, "n": n, "c": c })),
        Format::Csv => csv_rows(w, &["q", "n", "c"], &[vec![q.to_string(), n.to_string(), c.to_string()]]),
    }
}

pub fn cases<W: Write>(w: &mut W, f: Format, ids: &[&str]) -> io::Result<()> {
    match f {
        Format::Text => ids.iter().try_for_each(|id| writeln!(w, "{id}")),
        Format::Json => json(w, &ids),
        Format::Csv => csv_rows(w, &["case"], &ids.iter().map(|id| vec![id.to_string()]).collect::<Vec<_>>()),
    }
}

const REPORT_HEADER: &[&str] = &[
    "case",
    "q",
    "q2",
    "s",
    "N",
    "M",
    "P",
    "grouping",
    "partial_sum",
    "target",
    "abs_error",
    "tail_bound",
    "convergence_class",
    "verdict",
    "runtime_ms",
];

fn report_row(r: &TruncatedSumReport) -> Vec<String> {
    let p = &r.params;
    vec![
        r.case.clone(),
        p.q.to_string(),
        opt(p.q2),
        opt(p.s),
        p.n_terms.to_string(),
        opt(p.m_terms),
        opt(p.prime_bound),
        p.grouping.to_string(),
        r.partial_sum.to_string(),
        r.target.to_string(),
        r.abs_error.to_string(),
        opt(r.tail_bound),
        r.convergence_class.to_string(),
        r.verdict.to_string(),
        opt(r.runtime_ms),
    ]
}

pub fn report<W: Write>(w: &mut W, f: Format, r: &TruncatedSumReport) -> io::Result<()> {
    match f {
        Format::Text => writeln!(w, "{r}"),
        Format::Json => json(w, r),
        Format::Csv => csv_rows(w, REPORT_HEADER, &[report_row(r)]),
    }
}

pub fn coeff<W: Write>(w: &mut W, f: Format, r: &CoeffReport) -> io::Result<()> {
    match f {
        Format::Json => json(w, r),
        Format::Csv => csv_rows(
            w,
            &["case", "n", "n2", "s", "M", "P", "sum", "sum_tail", "euler", "euler_tail", "closed", "max_gap"],
            &[vec![
                r.case.clone(),
                r.n.to_string(),
                opt(r.n2),
                opt(r.s),
                opt(r.m_terms),
                opt(r.prime_bound),
                opt(r.sum),
                opt(r.sum_tail),
                opt(r.euler),
                opt(r.euler_tail),
                opt(r.closed),
                opt(r.max_gap),
            ]],
        ),
        Format::Text => {
            match r.n2 {
                Some(n2) => writeln!(w, "{} a({}, {n2})", r.case, r.n)?,
                None => writeln!(w, "{} a({})", r.case, r.n)?,
            }
            if let Some(v) = r.sum {
                writeln!(w, "  sum    {v:.12e}  (M={}, tail {})", opt(r.m_terms), opt(r.sum_tail))?;
            }
            if let Some(v) = r.euler {
                writeln!(w, "  euler  {v:.12e}  (P={}, tail {})", opt(r.prime_bound), opt(r.euler_tail))?;
            }
            if let Some(v) = r.closed {
                writeln!(w, "  closed {v:.12e}")?;
            }
            if let Some(g) = r.max_gap {
                writeln!(w, "  max gap {g:.3e}")?;
            }
            Ok(())
        }
    }
}

pub fn pairing<W: Write>(w: &mut W, f: Format, r: &PairingResult) -> io::Result<()> {
    match f {
        Format::Json => json(w, r),
        Format::Csv => csv_rows(
            w,
            &["case", "N", "Q", "scale", "lhs", "rhs", "abs_gap", "absolute_domination", "target", "lhs_error", "rhs_error"],
            &[vec![
                r.case.clone(),
                r.n_terms.to_string(),
                r.q_terms.to_string(),
                r.scale.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.abs_gap.to_string(),
                r.absolute_domination.to_string(),
                opt(r.target),
                opt(r.lhs_error),
                opt(r.rhs_error),
            ]],
        ),
        Format::Text => {
            writeln!(w, "{} N={} Q={} scale={}", r.case, r.n_terms, r.q_terms, r.scale)?;
            writeln!(w, "  lhs {:.12e}", r.lhs)?;
            writeln!(w, "  rhs {:.12e}", r.rhs)?;
            writeln!(w, "  gap {:.3e}  domination {:.6e}", r.abs_gap, r.absolute_domination)?;
            if let Some(t) = r.target {
                writeln!(w, "  target {t:.12e}  lhs err {}  rhs err {}", opt(r.lhs_error), opt(r.rhs_error))?;
            }
            Ok(())
        }
    }
}

pub fn suite<W: Write>(w: &mut W, f: Format, r: &SuiteResult) -> io::Result<()> {
    match f {
        Format::Json => json(w, r),
        Format::Csv => csv_rows(
            w,
            &["id", "name", "passed", "detail"],
            &r.criteria
                .iter()
                .map(|c| vec![c.id.to_string(), c.name.clone(), c.passed.to_string(), c.detail.clone()])
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            for c in &r.criteria {
                writeln!(w, "{}", c.line())?;
            }
            let failed = r.criteria.iter().filter(|c| !c.passed).count();
            writeln!(w, "seed {}: {} of {} passed", r.seed, r.criteria.len() - failed, r.criteria.len())
        }
    }
}
