//! Turns command-line options into a language, a specification and a corpus.

use std::path::Path;
use std::sync::Arc;

use bigstep_core::corpus::{
    fac_corpus, list_pairs, merge_instances, merge_list_corpus, random_ext_configs, random_fun_exprs,
    random_while_configs, Loops,
};
use bigstep_core::kernel::{Language, Specification};
use bigstep_core::lang::extwhile::{self as ext, merge_program, ExtLang, ExtState};
use bigstep_core::lang::fun::{as_canonical, parse_expr, subst, Canonical, Expr, FunLang};
use bigstep_core::lang::while_lang::{self as wl, WhileConfig, WhileLang, WhileState};
use bigstep_core::speclib::{FacSpec, MglistSpec, MsortSpec};
use bigstep_core::syntax::{split_top_level, ParseError};
use thiserror::Error;

use crate::args::{Command, Lang, Opts};

pub const FAC_WHILE: &str = include_str!("../programs/fac.while");
pub const MERGE_EXT: &str = include_str!("../programs/merge.ext");
pub const MERGE_FUN: &str = include_str!("../programs/merge.fun");

/// Loop-free configurations generated for `star-check` when no corpus is given.
pub const STAR_CORPUS_SIZE: usize = 50;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{err}")]
    Parse { origin: String, err: ParseError },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

fn parse_err(origin: impl Into<String>) -> impl FnOnce(ParseError) -> CliError {
    let origin = origin.into();
    move |err| CliError::Parse { origin, err }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecName {
    None,
    Star,
    Fac { mutant: bool },
    Msort { mutant: bool },
    Mglist { mutant: bool },
}

impl SpecName {
    pub fn parse(name: Option<&str>) -> Result<Self, CliError> {
        let Some(name) = name else {
            return Ok(SpecName::None);
        };
        let (base, mutant) = match name.strip_suffix("-mutant") {
            Some(b) => (b, true),
            None => (name, false),
        };
        Ok(match (base, mutant) {
            ("none", false) => SpecName::None,
            ("star", false) => SpecName::Star,
            ("fac", _) => SpecName::Fac { mutant },
            ("msort", _) => SpecName::Msort { mutant },
            ("mglist", _) => SpecName::Mglist { mutant },
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown spec `{name}`; expected fac, msort, mglist, a `-mutant` variant, star or none"
                )))
            }
        })
    }

    fn lang(self) -> Option<Lang> {
        match self {
            SpecName::Fac { .. } => Some(Lang::While),
            SpecName::Msort { .. } => Some(Lang::Extwhile),
            SpecName::Mglist { .. } => Some(Lang::Fun),
            SpecName::None | SpecName::Star => None,
        }
    }
}

pub fn lang_name(lang: Lang) -> &'static str {
    match lang {
        Lang::While => "while",
        Lang::Extwhile => "extwhile",
        Lang::Fun => "fun",
    }
}

pub fn resolve_lang(opts: &Opts, spec: SpecName) -> Result<Lang, CliError> {
    let from_ext = opts.program.as_deref().and_then(|p| match p.extension()?.to_str()? {
        "while" => Some(Lang::While),
        "ext" | "extwhile" => Some(Lang::Extwhile),
        "fun" => Some(Lang::Fun),
        _ => None,
    });
    let lang = opts
        .lang
        .or(spec.lang())
        .or(from_ext)
        .ok_or_else(|| CliError::Usage("cannot tell the language; pass --lang".into()))?;
    if let Some(expected) = spec.lang().filter(|l| *l != lang) {
        return Err(CliError::Usage(format!(
            "spec `{}` is for {} programs, not {}",
            opts.spec.as_deref().unwrap_or_default(),
            lang_name(expected),
            lang_name(lang)
        )));
    }
    if !opts.param.is_empty() && !matches!(spec, SpecName::Msort { .. }) {
        return Err(CliError::Usage("--param applies only to the msort specifications".into()));
    }
    Ok(lang)
}

/// What the command checks against.
pub enum SpecChoice<L: Language> {
    None,
    Star,
    Bundled(Box<dyn Specification<L>>),
}

pub struct Plan<L: Language> {
    pub lang: Arc<L>,
    pub spec: SpecChoice<L>,
    pub corpus: Vec<L::Config>,
}

struct Range {
    var: String,
    values: std::ops::RangeInclusive<i64>,
}

fn parse_range(var: &str, text: &str) -> Result<Range, CliError> {
    let bad = || CliError::Usage(format!("bad range `{text}`; expected LO..HI or a single integer"));
    let num = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    let values = match text.split_once("..") {
        Some((lo, hi)) => num(lo)?..=num(hi)?,
        None => num(text)?..=num(text)?,
    };
    Ok(Range {
        var: var.trim().to_string(),
        values,
    })
}

fn ranges(opts: &Opts) -> Result<Vec<Range>, CliError> {
    let mut out = Vec::new();
    for r in &opts.range {
        let (var, text) = r
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad range `{r}`; expected VAR=LO..HI")))?;
        out.push(parse_range(var, text)?);
    }
    if let Some(m) = &opts.m {
        out.push(parse_range("m", m)?);
    }
    Ok(out)
}

/// Each input, once for every combination of range values. Empty when
/// neither inputs nor ranges were given.
fn expand<S: Clone>(inputs: Vec<S>, ranges: &[Range], empty: S, set: impl Fn(S, &str, i64) -> S) -> Vec<S> {
    if inputs.is_empty() && ranges.is_empty() {
        return Vec::new();
    }
    let mut out = if inputs.is_empty() { vec![empty] } else { inputs };
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|s| r.values.clone().map(move |v| (s.clone(), v)))
            .map(|(s, v)| set(s, &r.var, v))
            .collect();
    }
    out
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn corpus_file<L: Language>(lang: &L, path: Option<&Path>) -> Result<Vec<L::Config>, CliError> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let config = lang.parse_config(line).map_err(|mut err| {
            err.line = i + 1;
            CliError::Parse {
                origin: path.display().to_string(),
                err,
            }
        })?;
        out.push(config);
    }
    Ok(out)
}

fn program_text(opts: &Opts, bundled: &'static str) -> Result<(String, String), CliError> {
    match &opts.program {
        Some(p) => Ok((p.display().to_string(), read(p)?)),
        None => Ok(("<bundled program>".into(), bundled.to_string())),
    }
}

/// How many generated configurations to add.
fn generated(opts: &Opts, cmd: Command) -> Option<usize> {
    let explicit = !opts.input.is_empty() || !opts.range.is_empty() || opts.m.is_some() || opts.corpus.is_some();
    opts.random.or((cmd == Command::StarCheck && !explicit).then_some(STAR_CORPUS_SIZE))
}

fn finish<L: Language>(lang: L, spec: SpecChoice<L>, mut corpus: Vec<L::Config>, fallback: impl FnOnce() -> Option<L::Config>) -> Result<Plan<L>, CliError> {
    if corpus.is_empty() {
        corpus.extend(fallback());
    }
    Ok(Plan {
        lang: Arc::new(lang),
        spec,
        corpus,
    })
}

fn star_or_none<L: Language>(spec: SpecName) -> SpecChoice<L> {
    match spec {
        SpecName::Star => SpecChoice::Star,
        _ => SpecChoice::None,
    }
}

pub fn while_plan(opts: &Opts, cmd: Command, spec: SpecName) -> Result<Plan<WhileLang>, CliError> {
    let (origin, text) = program_text(opts, FAC_WHILE)?;
    let stmt = Arc::new(wl::parse_stmt(&text).map_err(parse_err(origin))?);
    let inputs = opts
        .input
        .iter()
        .map(|s| wl::parse_state(s).map_err(parse_err("--input")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut corpus: Vec<WhileConfig> = expand(inputs, &ranges(opts)?, WhileState::new(), |st, x, v| st.with(x, v))
        .into_iter()
        .map(|st| WhileConfig::new(Arc::clone(&stmt), st))
        .collect();
    corpus.extend(corpus_file(&WhileLang, opts.corpus.as_deref())?);
    if let Some(n) = generated(opts, cmd) {
        corpus.extend(match spec {
            SpecName::Fac { .. } if cmd != Command::StarCheck => fac_corpus(1..=n as i64),
            _ => random_while_configs(n, opts.seed, Loops::Forbidden),
        });
    }
    let choice = match spec {
        SpecName::Fac { mutant } => SpecChoice::Bundled(Box::new(FacSpec { mutant })),
        other => star_or_none(other),
    };
    finish(WhileLang, choice, corpus, || Some(WhileConfig::new(stmt, WhileState::new())))
}

pub fn ext_plan(opts: &Opts, cmd: Command, spec: SpecName) -> Result<Plan<ExtLang>, CliError> {
    let (origin, text) = program_text(opts, MERGE_EXT)?;
    let (program, main) = ext::parse_program(&text).map_err(parse_err(origin.clone()))?;
    // Share the bundled program so specification lookups hit the pointer fast path.
    let program = if program == *merge_program().program {
        Arc::clone(&merge_program().program)
    } else {
        Arc::new(program)
    };
    let lang = ExtLang::new(program);
    let inputs = opts
        .input
        .iter()
        .map(|s| ext::parse_state(s).map_err(parse_err("--input")))
        .collect::<Result<Vec<_>, _>>()?;
    let states = expand(inputs, &ranges(opts)?, ExtState::default(), |st, x, v| st.with_name(x, v));
    let main = main.map(Arc::new);
    let need_main = || CliError::Usage(format!("{origin} has no main statement to run"));
    let mut corpus = Vec::new();
    for st in states {
        corpus.push(lang.config(Arc::clone(main.as_ref().ok_or_else(need_main)?), st));
    }
    corpus.extend(corpus_file(&lang, opts.corpus.as_deref())?);
    if let Some(n) = generated(opts, cmd) {
        match spec {
            SpecName::Msort { .. } if cmd != Command::StarCheck => {
                corpus.extend(merge_instances(n, opts.seed).iter().map(|m| m.config()))
            }
            _ => corpus.extend(random_ext_configs(n, opts.seed, Loops::Forbidden)),
        }
    }
    let choice = match spec {
        SpecName::Msort { mutant } => {
            let base = if mutant { MsortSpec::mutant() } else { MsortSpec::default() };
            let base = if opts.param.is_empty() { base } else { base.with_params(opts.param.clone()) };
            SpecChoice::Bundled(Box::new(base))
        }
        other => star_or_none(other),
    };
    let fallback = main.map(|m| lang.config(m, ExtState::default()));
    finish(lang, choice, corpus, || fallback)
}

/// `x = v, y = w` with canonical values.
fn parse_bindings(text: &str) -> Result<Vec<(String, Canonical)>, CliError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (item, tail) = split_top_level(rest, ',').unwrap_or((rest, ""));
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad binding `{}`; expected NAME = VALUE", item.trim())))?;
        let e = parse_expr(value).map_err(parse_err("--input"))?;
        let c = as_canonical(&e)
            .ok_or_else(|| CliError::Usage(format!("`{e}` is not a canonical form")))?;
        out.push((name.trim().to_string(), c));
        rest = tail.trim();
    }
    Ok(out)
}

pub fn fun_plan(opts: &Opts, cmd: Command, spec: SpecName) -> Result<Plan<FunLang>, CliError> {
    let (origin, text) = program_text(opts, MERGE_FUN)?;
    let program = Arc::new(parse_expr(&text).map_err(parse_err(origin))?);
    let inputs = opts
        .input
        .iter()
        .map(|s| parse_bindings(s))
        .collect::<Result<Vec<_>, _>>()?;
    let bindings = expand(inputs, &ranges(opts)?, Vec::new(), |mut b, x, v| {
        b.push((x.to_string(), Canonical::Int(v)));
        b
    });
    let mut corpus: Vec<Arc<Expr>> = bindings
        .iter()
        .map(|b| b.iter().fold(Arc::clone(&program), |e, (x, c)| subst(&e, x, c)))
        .collect();
    let lang = FunLang::default();
    corpus.extend(corpus_file(&lang, opts.corpus.as_deref())?);
    if let Some(n) = generated(opts, cmd) {
        corpus.extend(match spec {
            SpecName::Mglist { .. } if cmd != Command::StarCheck => merge_list_corpus(&list_pairs(n, opts.seed)),
            _ => random_fun_exprs(n, opts.seed, Loops::Forbidden),
        });
    }
    let choice = match spec {
        SpecName::Mglist { mutant } => SpecChoice::Bundled(Box::new(MglistSpec { mutant })),
        other => star_or_none(other),
    };
    finish(lang, choice, corpus, || Some(program))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bigstep_core::lang::fun::merge_templates;
    use bigstep_core::lang::while_lang::factorial_program;

    #[test]
    fn bundled_programs_match_the_specified_ones() {
        assert_eq!(wl::parse_stmt(FAC_WHILE).unwrap(), *factorial_program());
        let (program, main) = ext::parse_program(MERGE_EXT).unwrap();
        assert_eq!(program, *merge_program().program);
        assert!(main.is_some());
        assert_eq!(parse_expr(MERGE_FUN).unwrap(), *merge_templates().letrec);
    }

    #[test]
    fn spec_names() {
        assert_eq!(SpecName::parse(Some("msort-mutant")).unwrap(), SpecName::Msort { mutant: true });
        assert_eq!(SpecName::parse(None).unwrap(), SpecName::None);
        assert!(SpecName::parse(Some("star-mutant")).is_err());
    }

    #[test]
    fn ranges_expand_every_input() {
        let r = [parse_range("m", "1..3").unwrap(), parse_range("n", "5").unwrap()];
        let out = expand(vec![0, 100], &r, 0, |s, x, v| s + if x == "m" { v } else { 10 * v });
        assert_eq!(out, vec![51, 52, 53, 151, 152, 153]);
        assert!(expand(Vec::<i32>::new(), &[], 0, |s, _, _| s).is_empty());
    }

    #[test]
    fn bindings_split_at_top_level_commas() {
        let b = parse_bindings("l1 = 1 :: 2 :: nil, l2 = nil").unwrap();
        assert_eq!(b[0], ("l1".to_string(), Canonical::list(&[1, 2])));
        assert_eq!(b[1], ("l2".to_string(), Canonical::list(&[])));
        assert!(parse_bindings("x = y").is_err());
    }
}
