use std::path::PathBuf;

use clap::Subcommand;
use fano_mms::chow::{eval_class_expr, parse_class_expr, FamilyParams};
use fano_mms::families::{classification_table, ClassificationRow};
use fano_mms::lines::{exceptional_set, lines_table, LINES_CSV_HEADER};
use fano_mms::mms::{
    exclusion_certificate, falsify_certificate, ledger_fuzz, CertificateCase, CertificateCheck, FalsificationReport,
    ResolutionGraph,
};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::config::{parse_range, Format, RunConfig};

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
pub enum Command {
    /// Enumerate K²-failing families and classify them against the catalog.
    Classify,
    /// Evaluate a class monomial such as "K^2 L^(M-1)" on a family.
    ChowEval {
        expr: String,
        #[arg(long)]
        family: String,
    },
    /// Verify every exclusion certificate and sweep the falsification grid.
    Certify {
        /// Only these cases (comma separated).
        #[arg(long)]
        cases: Option<String>,
        /// Print each certificate in canonical text form.
        #[arg(long)]
        dump: bool,
    },
    /// λ, hypertangent bounds, exceptional set and mobile ratio per (m, l).
    LinesTable {
        /// m range, e.g. 3..12
        #[arg(long)]
        m: Option<String>,
        /// l range, e.g. 3..8
        #[arg(long)]
        l: Option<String>,
    },
    /// Random DAG and ledger checks for the path-count recurrence, (b8), (b2), (b3).
    LedgerFuzz {
        #[arg(long)]
        graphs: Option<usize>,
        #[arg(long)]
        ledgers: Option<usize>,
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Path counts, partition sums, Noether–Fano and the quadratic bound for a JSON graph.
    GraphEval {
        graph: PathBuf,
        /// Per-vertex multiplicities ν, comma separated.
        #[arg(long)]
        nu: Option<String>,
        #[arg(long, default_value = "1")]
        n: String,
        /// Excess for the quadratic bound; defaults to the Noether–Fano slack.
        #[arg(long)]
        e: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::ChowEval { .. } => "chow-eval",
            Command::Certify { .. } => "certify",
            Command::LinesTable { .. } => "lines-table",
            Command::LedgerFuzz { .. } => "ledger-fuzz",
            Command::GraphEval { .. } => "graph-eval",
        }
    }
}

/// Exit status 0 or 2 plus the emitted bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub status: i32,
    pub output: String,
}

/// Usage or input problems (exit 1).
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Res = Result<Artifact, UsageError>;

fn done(ok: bool, output: String) -> Res {
    Ok(Artifact {
        status: if ok { 0 } else { 2 },
        output,
    })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Left-aligned columns separated by two spaces.
fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, (c, w)) in cells.iter().zip(&width).enumerate() {
            if k + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Res {
    match cmd {
        Command::Classify => classify(cfg),
        Command::ChowEval { expr, family } => chow_eval(expr, family, cfg.format),
        Command::Certify { cases, dump } => certify(cases.as_deref(), *dump, cfg),
        Command::LinesTable { m, l } => lines(m.as_deref(), l.as_deref(), cfg),
        Command::LedgerFuzz { graphs, ledgers, max_k } => fuzz(*graphs, *ledgers, *max_k, cfg),
        Command::GraphEval { graph, nu, n, e } => graph_eval(graph, nu.as_deref(), n, e.as_deref(), cfg.format),
    }
}

const CLASSIFY_HEADER: [&str; 12] = [
    "block",
    "type",
    "family",
    "kind",
    "m_range",
    "k2",
    "depth",
    "depth_max",
    "depth2_ok",
    "k_condition",
    "theorem1",
    "provenance",
];

fn classify_fields(r: &ClassificationRow) -> Vec<String> {
    vec![
        r.block.clone(),
        r.catalog_type.clone(),
        r.family.clone(),
        r.kind.clone(),
        r.m_range.clone(),
        r.k2_value.clone(),
        r.depth.clone(),
        r.depth_max.clone(),
        r.depth2_ok.to_string(),
        r.k_condition.clone(),
        r.theorem1_class.clone(),
        r.provenance.clone(),
    ]
}

fn classify(cfg: &RunConfig) -> Res {
    let table = classification_table(&cfg.caps)?;
    let ok = table.studied_certified();
    let header = &CLASSIFY_HEADER;
    let rows: Vec<Vec<String>> = table.rows.iter().map(classify_fields).collect();
    let out = match cfg.format {
        Format::Json => json(&table),
        Format::Csv => csv_text(header, rows),
        Format::Text => {
            let mut s = text_table(header, &rows);
            for m in &table.missing {
                s.push_str(&format!("missing under these caps: {m}\n"));
            }
            s.push_str(&format!(
                "studied families: {} certified: {}\n",
                table.rows.iter().filter(|r| r.block == "studied").count(),
                if ok { "yes" } else { "no" }
            ));
            s
        }
    };
    done(ok, out)
}

#[derive(Serialize)]
struct ChowValue<'a> {
    expression: &'a str,
    family: String,
    value: String,
}

fn chow_eval(expr: &str, family: &str, format: Format) -> Res {
    let fp: FamilyParams = family.parse()?;
    let e = parse_class_expr(expr)?;
    let v = eval_class_expr(&e, &fp)?;
    let out = match format {
        Format::Text => format!("{v}\n"),
        Format::Json => json(&ChowValue {
            expression: expr,
            family: fp.to_string(),
            value: v.to_string(),
        }),
        Format::Csv => csv_text(&["expression", "family", "value"], [vec![expr.to_string(), fp.to_string(), v.to_string()]]),
    };
    done(true, out)
}

#[derive(Serialize)]
struct CertEntry {
    #[serde(flatten)]
    check: CertificateCheck,
    falsification: FalsificationReport,
}

#[derive(Serialize)]
struct CertifySummary {
    certificates: Vec<CertEntry>,
    verified: usize,
    counterexamples: usize,
}

fn certify(cases: Option<&str>, dump: bool, cfg: &RunConfig) -> Res {
    let selected: Vec<CertificateCase> = match cases {
        None => CertificateCase::ALL.to_vec(),
        Some(list) => list
            .split(',')
            .map(|c| CertificateCase::parse(c.trim()).ok_or_else(|| UsageError(format!("unknown certificate `{c}`"))))
            .collect::<Result<_, _>>()?,
    };
    let mut entries = Vec::new();
    let mut dumps = String::new();
    for case in selected {
        let cert = exclusion_certificate(case);
        if dump {
            dumps.push_str(&cert.dump());
        }
        entries.push(CertEntry {
            check: cert.verify(),
            falsification: falsify_certificate(&cert, &cfg.grid)?,
        });
    }
    let verified = entries.iter().filter(|e| e.check.holds).count();
    let counterexamples = entries.iter().filter(|e| e.falsification.counterexample.is_some()).count();
    let ok = verified == entries.len() && counterexamples == 0;
    let summary = CertifySummary {
        certificates: entries,
        verified,
        counterexamples,
    };
    let out = match cfg.format {
        Format::Json => json(&summary),
        Format::Csv => csv_text(
            &["case", "verified", "grid_points", "counterexample"],
            summary.certificates.iter().map(|e| {
                vec![
                    e.check.case.to_string(),
                    e.check.holds.to_string(),
                    e.falsification.grid_points.to_string(),
                    e.falsification
                        .counterexample
                        .as_ref()
                        .map(|c| counterexample_text(&c.assignment))
                        .unwrap_or_default(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = dumps;
            for e in &summary.certificates {
                let status = if e.check.holds { "verified" } else { "FAILED" };
                let falsified = match &e.falsification.counterexample {
                    None => "no counterexample".to_string(),
                    Some(c) => format!("counterexample {} (value {})", counterexample_text(&c.assignment), c.value),
                };
                s.push_str(&format!(
                    "{}: {status}; {} grid points, {falsified}\n",
                    e.check.case, e.falsification.grid_points
                ));
                for d in &e.check.diagnostics {
                    s.push_str(&format!("  {d}\n"));
                }
            }
            s.push_str(&format!(
                "{} certificates verified, {} counterexamples\n",
                summary.verified, summary.counterexamples
            ));
            s
        }
    };
    done(ok, out)
}

fn counterexample_text(a: &[(String, String)]) -> String {
    a.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct LinesSummary {
    rows: Vec<fano_mms::lines::LinesRow>,
    exceptional: Vec<(u64, u64)>,
}

fn lines(m: Option<&str>, l: Option<&str>, cfg: &RunConfig) -> Res {
    let (m_lo, m_hi) = m.map(parse_range).transpose()?.unwrap_or((cfg.lines.m_min, cfg.lines.m_max));
    let (l_lo, l_hi) = l.map(parse_range).transpose()?.unwrap_or((cfg.lines.l_min, cfg.lines.l_max));
    if m_lo < 3 || l_lo < 3 || m_lo > m_hi || l_lo > l_hi {
        return Err(UsageError("lines ranges need 3 <= min <= max".into()));
    }
    let rows = lines_table(m_lo..=m_hi, l_lo..=l_hi)?;
    let exceptional: Vec<_> = exceptional_set(m_lo..=m_hi, l_lo..=l_hi)?.into_iter().collect();
    let ok = rows.iter().filter(|r| r.m >= 4).all(|r| r.ratio_verdict == "> 2/3");
    let fields: Vec<Vec<String>> = rows.iter().map(|r| r.fields().to_vec()).collect();
    let out = match cfg.format {
        Format::Json => json(&LinesSummary { rows, exceptional }),
        Format::Csv => csv_text(&LINES_CSV_HEADER, fields),
        Format::Text => {
            let mut s = text_table(&LINES_CSV_HEADER, &fields);
            let list: Vec<String> = exceptional.iter().map(|(m, l)| format!("({m},{l})")).collect();
            s.push_str(&format!("exceptional set: {}\n", list.join(" ")));
            s
        }
    };
    done(ok, out)
}

fn fuzz(graphs: Option<usize>, ledgers: Option<usize>, max_k: Option<usize>, cfg: &RunConfig) -> Res {
    let f = &cfg.fuzz;
    let report = ledger_fuzz(
        f.seed,
        graphs.unwrap_or(f.graphs),
        ledgers.unwrap_or(f.ledgers),
        max_k.unwrap_or(f.max_k),
    );
    let ok = report.passed();
    let counts = [
        ("graphs", report.graphs),
        ("ledgers", report.ledgers),
        ("recurrence_failures", report.recurrence_failures),
        ("compatibility_failures", report.compatibility_failures),
        ("invalid_ledgers", report.invalid_ledgers),
        ("b8_failures", report.b8_failures),
        ("b2_failures", report.b2_failures),
        ("b3_failures", report.b3_failures),
    ];
    let out = match cfg.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut header = vec!["seed"];
            header.extend(counts.iter().map(|c| c.0));
            let mut row = vec![report.seed.to_string()];
            row.extend(counts.iter().map(|c| c.1.to_string()));
            csv_text(&header, [row])
        }
        Format::Text => {
            let mut s = format!("seed {}\n", report.seed);
            for (k, v) in counts {
                s.push_str(&format!("{k}: {v}\n"));
            }
            for note in &report.failures {
                s.push_str(&format!("  {note}\n"));
            }
            s.push_str(if ok { "all checks passed\n" } else { "CHECKS FAILED\n" });
            s
        }
    };
    done(ok, out)
}

#[derive(Serialize)]
struct GraphReport {
    path_counts: Vec<u64>,
    partition: fano_mms::mms::PartitionSums,
    noether_fano: Option<fano_mms::mms::NoetherFano>,
    n: String,
    e: Option<String>,
    quadratic_bound: Option<String>,
}

fn rational(s: &str) -> Result<BigRational, UsageError> {
    s.trim().parse().map_err(|_| UsageError(format!("`{s}` is not a rational number")))
}

fn graph_eval(path: &PathBuf, nu: Option<&str>, n: &str, e: Option<&str>, format: Format) -> Res {
    let text = std::fs::read_to_string(path).map_err(|err| UsageError(format!("cannot read {}: {err}", path.display())))?;
    let g: ResolutionGraph = serde_json::from_str(&text)?;
    let n = rational(n)?;
    let p = g.path_counts()?;
    let partition = g.partition_sums()?;
    let nf = match nu {
        Some(list) => {
            let nu: Vec<BigRational> = list.split(',').map(rational).collect::<Result<_, _>>()?;
            Some(g.noether_fano(&nu, &n)?)
        }
        None => None,
    };
    let e = match e {
        Some(s) => Some(rational(s)?),
        None => nf.as_ref().filter(|x| x.holds).map(|x| x.excess.clone()),
    };
    let bound = match &e {
        Some(e) if *e >= BigRational::zero() => Some(g.quadratic_lower_bound(&n, e)?),
        Some(_) => return Err(UsageError("e must be nonnegative".into())),
        None => None,
    };
    let report = GraphReport {
        path_counts: p,
        partition,
        noether_fano: nf,
        n: n.to_string(),
        e: e.map(|x| x.to_string()),
        quadratic_bound: bound.map(|x| x.to_string()),
    };
    let s = &report.partition;
    let out = match format {
        Format::Json => json(&report),
        Format::Csv => csv_text(
            &["vertex", "p", "class"],
            report
                .path_counts
                .iter()
                .enumerate()
                .map(|(i, p)| vec![(i + 1).to_string(), p.to_string(), format!("{:?}", g.index_class(i + 1))]),
        ),
        Format::Text => {
            let ps: Vec<String> = report.path_counts.iter().map(u64::to_string).collect();
            let mut out = format!("p = ({})\n", ps.join(", "));
            out.push_str(&format!(
                "Sigma_s={} Sigma_m+={} Sigma_m-={} Sigma_u={} Sigma_l={} Sigma_f={} N={} L={}\n",
                s.sigma_s, s.sigma_m_plus, s.sigma_m_minus, s.sigma_u, s.sigma_l, s.sigma_f, s.n_fiber, s.l_top
            ));
            if let Some(nf) = &report.noether_fano {
                out.push_str(&format!(
                    "Noether-Fano: {} ({} vs {}, e = {})\n",
                    if nf.holds { "holds" } else { "fails" },
                    nf.lhs,
                    nf.rhs,
                    nf.excess
                ));
            }
            if let (Some(e), Some(b)) = (&report.e, &report.quadratic_bound) {
                out.push_str(&format!("quadratic bound (n = {}, e = {e}): {b}\n", report.n));
            }
            out
        }
    };
    done(true, out)
}
