use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cwf_core::cw::{build_term, verify_term, CwTerm, TermCheck};
use cwf_core::decompose::{build_partition, verify_observations, ConfigurationDoc, Verdict};
use cwf_core::generators::{gen_3ring, gen_instance, gen_random};
use cwf_core::oracles::{
    chromatic_number_exact, chromatic_via_simplicial, color_via_term, min_cwd, Colouring,
    OracleError,
};
use cwf_core::{find_c6, is_in_class, parse_graph, ClassVerdict, Graph, VertexPartition};
use serde_json::{json, Value};

use crate::args::{GenArgs, GenKind, Method};
use crate::{CliError, ExitStatus, Outcome};

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_graph(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json_string<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain JSON")
}

fn with_input(path: &Path, f: impl FnOnce(Graph) -> Result<Outcome, CliError>) -> Outcome {
    match read_graph(path).and_then(f) {
        Ok(o) => o,
        Err(e) => Outcome::error(Some(path), &e),
    }
}

fn input_name(path: &Path) -> String {
    path.display().to_string()
}

pub fn cmd_check(path: &Path) -> Outcome {
    with_input(path, |g| {
        let verdict = is_in_class(&g);
        let c6 = if verdict.is_in_class() {
            find_c6(&g)
        } else {
            None
        };
        let (status, text) = match (&verdict, c6) {
            (ClassVerdict::Witness { pattern, vertices }, _) => (
                ExitStatus::Negative,
                format!("not in class: induced {pattern} on {vertices:?}"),
            ),
            (ClassVerdict::InClass, Some(c)) => {
                (ExitStatus::Success, format!("in class, C6 found at {c:?}"))
            }
            (ClassVerdict::InClass, None) => {
                (ExitStatus::Negative, "in class but no C6".to_string())
            }
        };
        Ok(Outcome {
            status,
            text,
            json: json!({
                "input": input_name(path),
                "class": verdict,
                "c6": c6,
            }),
        })
    })
}

fn verdict_table(verdicts: &[Verdict]) -> String {
    let mut s = String::new();
    for v in verdicts {
        let _ = writeln!(s, "  {v}");
    }
    s
}

pub fn cmd_decompose(path: &Path, out: Option<&Path>) -> Outcome {
    with_input(path, |g| {
        let r = match build_partition(&g) {
            Ok(r) => r,
            Err(e) => {
                return Ok(Outcome {
                    status: ExitStatus::Negative,
                    text: format!("decomposition failed: {e}"),
                    json: json!({
                        "input": input_name(path),
                        "error": e.to_string(),
                        "witness": e.witness(),
                    }),
                })
            }
        };
        let doc = r.to_doc();
        if let Some(out) = out {
            write_file(out, &to_json_string(&doc))?;
        }
        let mut text = format!(
            "anchor {:?}, {} non-empty parts, {} checks, {}",
            r.anchor,
            r.partition.non_empty_parts(),
            r.verdicts.len(),
            if r.all_pass() { "all pass" } else { "FAILURES" }
        );
        for part in r
            .partition
            .parts()
            .iter()
            .filter(|p| !p.vertices.is_empty())
        {
            let _ = write!(text, "\n  {}: {:?}", part.name, part.vertices.to_vec());
        }
        if !r.all_pass() {
            let failed: Vec<Verdict> = r.failures().cloned().collect();
            text.push('\n');
            text.push_str(&verdict_table(&failed));
        }
        Ok(Outcome {
            status: if r.all_pass() {
                ExitStatus::Success
            } else {
                ExitStatus::Negative
            },
            text,
            json: json!({ "input": input_name(path), "report": doc }),
        })
    })
}

#[derive(Clone, Debug)]
pub struct TermOptions {
    pub out: Option<PathBuf>,
    pub verify: bool,
    pub max_width: usize,
}

impl Default for TermOptions {
    fn default() -> Self {
        TermOptions {
            out: None,
            verify: true,
            max_width: 27,
        }
    }
}

fn report_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

/// Class gate, decomposition, peel and expression. Writes the term to
/// `out` and the decomposition report beside it.
pub fn cmd_term(path: &Path, opts: &TermOptions) -> Outcome {
    with_input(path, |g| {
        let name = input_name(path);
        let negative = |text: String, extra: Value| Outcome {
            status: ExitStatus::Negative,
            text,
            json: json!({ "input": name, "ok": false, "detail": extra }),
        };
        if let ClassVerdict::Witness { pattern, vertices } = is_in_class(&g) {
            return Ok(negative(
                format!("not in class: induced {pattern} on {vertices:?}"),
                json!({ "pattern": pattern, "vertices": vertices }),
            ));
        }
        let r = match build_partition(&g) {
            Ok(r) => r,
            Err(e) => {
                return Ok(negative(
                    format!("decomposition failed: {e}"),
                    json!({ "error": e.to_string(), "witness": e.witness() }),
                ))
            }
        };
        let doc = r.to_doc();
        if let Some(out) = &opts.out {
            write_file(&report_path(out), &to_json_string(&doc))?;
        }
        if !r.all_pass() {
            let failed: Vec<Verdict> = r.failures().cloned().collect();
            return Ok(negative(
                format!("decomposition checks failed:\n{}", verdict_table(&failed)),
                json!({ "failures": failed }),
            ));
        }
        let t = match build_term(&g, &r.partition) {
            Ok(t) => t,
            Err(e) => {
                return Ok(negative(
                    format!("no expression: {e}"),
                    json!(e.to_string()),
                ))
            }
        };
        let check = if opts.verify {
            match verify_term(&t, &g) {
                Ok(c) => Some(c),
                Err(e) => {
                    return Ok(negative(
                        format!("term does not evaluate: {e}"),
                        json!(e.to_string()),
                    ))
                }
            }
        } else {
            None
        };
        if let Some(out) = &opts.out {
            write_file(out, &to_json_string(&t))?;
        }
        let width = t.width();
        let verified = check.as_ref().map(TermCheck::is_ok);
        let ok = verified != Some(false) && width <= opts.max_width;
        log::info!("{name}: width {width}, budget {}", t.budget);
        let mut text = format!(
            "width {width} (budget {}), {} ops, {} non-empty parts",
            t.budget,
            t.ops.len(),
            r.partition.non_empty_parts()
        );
        match &check {
            Some(TermCheck::Ok { .. }) => text.push_str(", verified"),
            Some(TermCheck::Mismatch { .. }) => text.push_str(", VERIFY FAILED"),
            None => {}
        }
        if width > opts.max_width {
            let _ = write!(text, ", exceeds --max-width {}", opts.max_width);
        }
        let mut j = json!({
            "input": name,
            "ok": ok,
            "width": width,
            "budget": t.budget,
            "parts": r.partition.non_empty_parts(),
            "verify": check,
        });
        match &opts.out {
            Some(out) => {
                j["term_path"] = json!(out.display().to_string());
                j["report_path"] = json!(report_path(out).display().to_string());
            }
            None => j["term"] = serde_json::to_value(&t).expect("plain JSON"),
        }
        Ok(Outcome {
            status: if ok {
                ExitStatus::Success
            } else {
                ExitStatus::Negative
            },
            text,
            json: j,
        })
    })
}

fn oracle_usage(e: OracleError) -> CliError {
    CliError::Usage(format!("{e}; try a smaller graph or a different --method"))
}

pub fn cmd_cwd_oracle(path: &Path, max_width: usize) -> Outcome {
    with_input(path, |g| {
        let found = min_cwd(&g, max_width).map_err(oracle_usage)?;
        let name = input_name(path);
        Ok(match found {
            Some(d) => Outcome {
                status: ExitStatus::Success,
                text: format!("clique-width {} (n = {})", d.width, d.n),
                json: json!({ "input": name, "width": d.width, "witness": d.witness }),
            },
            None => Outcome {
                status: ExitStatus::Negative,
                text: format!("clique-width exceeds {max_width}"),
                json: json!({ "input": name, "width": null, "exceeds": max_width }),
            },
        })
    })
}

/// Expression for the DP: the pipeline's when the graph decomposes cleanly,
/// otherwise one part per vertex.
fn colouring_term(g: &Graph) -> (CwTerm, &'static str) {
    if is_in_class(g).is_in_class() {
        if let Ok(r) = build_partition(g) {
            if r.all_pass() {
                if let Ok(t) = build_term(g, &r.partition) {
                    return (t, "pipeline");
                }
            }
        }
    }
    let p = VertexPartition::singletons(g);
    (
        build_term(g, &p).expect("singletons always peel"),
        "singletons",
    )
}

/// Smallest q for which the expression DP finds a colouring.
pub fn chromatic_via_term(g: &Graph, t: &CwTerm, budget: usize) -> Result<Colouring, OracleError> {
    for q in 0..=g.n() {
        if let Some(c) = color_via_term(t, q, budget)? {
            return Ok(c);
        }
    }
    unreachable!("n colours always suffice")
}

pub fn cmd_color(path: &Path, method: Method, budget: usize) -> Outcome {
    with_input(path, |g| {
        let mut results: Vec<(&str, Colouring)> = Vec::new();
        let mut notes: Vec<String> = Vec::new();
        let all = method == Method::All;
        let mut record = |name: &'static str, r: Result<Colouring, OracleError>| match r {
            Ok(c) => {
                results.push((name, c));
                Ok(())
            }
            Err(e) if all => {
                notes.push(format!("{name} skipped: {e}"));
                Ok(())
            }
            Err(e) => Err(oracle_usage(e)),
        };
        if all || method == Method::Exact {
            record("exact", chromatic_number_exact(&g))?;
        }
        if all || method == Method::SimplicialExact {
            record("simplicial-exact", chromatic_via_simplicial(&g))?;
        }
        if all || method == Method::TermDp {
            let (t, source) = colouring_term(&g);
            record("term-dp", chromatic_via_term(&g, &t, budget))?;
            notes.push(format!(
                "term-dp expression from {source}, width {}",
                t.width()
            ));
        }
        if results.is_empty() {
            return Err(CliError::Usage(format!(
                "no method could run: {}",
                notes.join("; ")
            )));
        }
        let improper: Vec<&str> = results
            .iter()
            .filter(|(_, c)| !c.is_proper(&g))
            .map(|(m, _)| *m)
            .collect();
        let counts: Vec<usize> = results.iter().map(|(_, c)| c.count).collect();
        let agree = counts.windows(2).all(|w| w[0] == w[1]);
        let ok = agree && improper.is_empty();
        let mut text = String::new();
        for (m, c) in &results {
            let _ = writeln!(text, "{m}: chi = {}, colours {:?}", c.count, c.colours);
        }
        for n in &notes {
            let _ = writeln!(text, "{n}");
        }
        if !agree {
            text.push_str("methods DISAGREE\n");
        }
        if !improper.is_empty() {
            let _ = writeln!(text, "improper colouring from {improper:?}");
        }
        let by_method: serde_json::Map<String, Value> = results
            .iter()
            .map(|(m, c)| (m.to_string(), serde_json::to_value(c).expect("plain JSON")))
            .collect();
        Ok(Outcome {
            status: if ok {
                ExitStatus::Success
            } else {
                ExitStatus::Negative
            },
            text,
            json: json!({
                "input": input_name(path),
                "chi": if agree { counts.first().copied() } else { None },
                "agree": agree,
                "methods": by_method,
                "notes": notes,
            }),
        })
    })
}

fn parse_profiles(a: &GenArgs) -> Result<[Vec<usize>; 3], CliError> {
    if a.profiles.len() != 3 {
        return Err(CliError::Usage(format!(
            "a ring needs three --profile values, got {}",
            a.profiles.len()
        )));
    }
    let parse = |s: &String| -> Result<Vec<usize>, CliError> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|e| CliError::Usage(format!("profile `{s}`: {e}")))
            })
            .collect()
    };
    Ok([
        parse(&a.profiles[0])?,
        parse(&a.profiles[1])?,
        parse(&a.profiles[2])?,
    ])
}

fn generate(a: &GenArgs) -> Result<Outcome, CliError> {
    let usage = |e: cwf_core::generators::GenError| CliError::Usage(e.to_string());
    let mut extra = json!({});
    let (g, partition) = match a.kind {
        GenKind::Instance => {
            let params = a.preset.params(a.seed);
            let inst = gen_instance(&params).map_err(usage)?;
            extra = json!({ "preset": a.preset.name(), "attempts": inst.attempts, "staircases": inst.staircases });
            (inst.graph, Some(inst.intended))
        }
        GenKind::Ring => {
            let ring = gen_3ring(a.m, &parse_profiles(a)?).map_err(usage)?;
            extra = json!({ "box_edges": ring.boxes.edges() });
            (ring.graph, Some(ring.partition))
        }
        GenKind::Random => (gen_random(a.n, a.p, a.seed).map_err(usage)?, None),
    };
    let text_graph = g.to_dimacs();
    let mut j = json!({
        "kind": format!("{:?}", a.kind).to_lowercase(),
        "seed": a.seed,
        "n": g.n(),
        "m": g.m(),
        "details": extra,
    });
    let text = match &a.out {
        Some(out) => {
            write_file(out, &text_graph)?;
            j["graph_path"] = json!(out.display().to_string());
            if let Some(p) = &partition {
                let mut pp = out.as_os_str().to_owned();
                pp.push(".partition.json");
                let pp = PathBuf::from(pp);
                write_file(&pp, &to_json_string(&p.to_doc()))?;
                j["partition_path"] = json!(pp.display().to_string());
            }
            format!("wrote {} (n = {}, m = {})", out.display(), g.n(), g.m())
        }
        None => text_graph,
    };
    Ok(Outcome {
        status: ExitStatus::Success,
        text,
        json: j,
    })
}

pub fn cmd_gen(a: &GenArgs) -> Outcome {
    generate(a).unwrap_or_else(|e| Outcome::error(None, &e))
}

/// Verdict table for the decomposition; with `toggles`, the report is
/// re-checked against the graph with those edges flipped.
pub fn cmd_probe(path: &Path, toggles: &[(usize, usize)]) -> Outcome {
    with_input(path, |g| {
        let name = input_name(path);
        let r = match build_partition(&g) {
            Ok(r) => r,
            Err(e) => {
                return Ok(Outcome {
                    status: ExitStatus::Negative,
                    text: format!("decomposition failed: {e}"),
                    json: json!({ "input": name, "error": e.to_string(), "witness": e.witness() }),
                })
            }
        };
        let mut target = g.clone();
        for &(u, v) in toggles {
            if u >= g.n() || v >= g.n() || u == v {
                return Err(CliError::Usage(format!(
                    "cannot toggle {u}-{v} on {} vertices",
                    g.n()
                )));
            }
            target = target.with_edge_toggled(u, v);
        }
        let verdicts = if toggles.is_empty() {
            r.verdicts.clone()
        } else {
            verify_observations(&target, &r)
        };
        let configurations: Vec<ConfigurationDoc> = r
            .configurations
            .iter()
            .map(ConfigurationDoc::from)
            .collect();
        let all_pass = verdicts.iter().all(|v| v.pass);
        let mut text = format!("anchor {:?}\n", r.anchor);
        for c in &configurations {
            let _ = writeln!(text, "configuration {}", to_json_line(c));
        }
        text.push_str(&verdict_table(&verdicts));
        let _ = write!(
            text,
            "{} of {} checks pass",
            verdicts.iter().filter(|v| v.pass).count(),
            verdicts.len()
        );
        Ok(Outcome {
            status: if all_pass {
                ExitStatus::Success
            } else {
                ExitStatus::Negative
            },
            text,
            json: json!({
                "input": name,
                "anchor": r.anchor,
                "toggled": toggles,
                "configurations": configurations,
                "verdicts": verdicts,
                "all_pass": all_pass,
            }),
        })
    })
}

fn to_json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain JSON")
}
