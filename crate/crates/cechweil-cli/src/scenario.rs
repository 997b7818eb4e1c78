//! The scenario file format: a line-oriented text format describing a
//! cover with charts and restrictions, a complex of bundles on the nerve,
//! its Green splitting structure, local connections, admissibility
//! witnesses, twisting data, and optional form families.
//!
//! See `docs/scenario-format.md` in the repository root for the grammar.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use cechweil::algebra::{Chart, ChartRef, Matrix, RatFunc, Var};
use cechweil::bundles::{
    BundleOnNerve, ComplexOnNerve, ElementarySummand, ElementaryWitness, GreenStructure,
    Splitting,
};
use cechweil::connections::{
    canonical_witnesses, AdmissibilityWitness, LocalConnection, WitnessPair,
};
use cechweil::cover::{Cover, Substitution, Support, Tuple};
use cechweil::forms::{Form, SimplicialFormFamily};
use cechweil::twisting::{LocalComplexFamily, TwistingCochain};

use crate::expr::{parse_form, parse_scalar};

/// Errors carry the 1-based line number when one is known.
#[derive(Debug)]
pub enum LoadError {
    Parse { line: usize, msg: String },
    Validation(String),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            LoadError::Validation(msg) => write!(f, "validation error: {msg}"),
        }
    }
}

impl std::error::Error for LoadError {}

impl From<cechweil::Error> for LoadError {
    fn from(e: cechweil::Error) -> Self {
        LoadError::Validation(e.to_string())
    }
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, LoadError> {
    Err(LoadError::Parse {
        line,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSpec {
    None,
    Canonical,
    Explicit,
}

/// A fully validated in-memory scenario.
pub struct Scenario {
    pub name: String,
    pub cover: Cover,
    pub complex: Option<ComplexOnNerve>,
    pub green: Option<GreenStructure>,
    pub locals: Option<BTreeMap<u8, LocalConnection>>,
    pub witness_spec: WitnessSpec,
    pub explicit_witnesses: BTreeMap<usize, AdmissibilityWitness>,
    pub twisting: Option<TwistingCochain>,
    pub family: Option<SimplicialFormFamily>,
}

impl Scenario {
    pub fn witnesses_for(&self, star: usize) -> Result<AdmissibilityWitness, LoadError> {
        match self.witness_spec {
            WitnessSpec::Canonical => {
                let cx = self
                    .complex
                    .as_ref()
                    .ok_or_else(|| LoadError::Validation("no [complex] section".into()))?;
                let gs = self
                    .green
                    .as_ref()
                    .ok_or_else(|| LoadError::Validation("no [green] section".into()))?;
                Ok(canonical_witnesses(cx, gs, &self.cover, star)?)
            }
            WitnessSpec::Explicit => self
                .explicit_witnesses
                .get(&star)
                .cloned()
                .ok_or_else(|| {
                    LoadError::Validation(format!("no witnesses declared for level {star}"))
                }),
            WitnessSpec::None => Err(LoadError::Validation(
                "no [witnesses] section in the scenario".into(),
            )),
        }
    }
}

struct Section {
    header: String,
    header_line: usize,
    lines: Vec<(usize, String)>,
}

fn split_sections(text: &str) -> Result<Vec<Section>, LoadError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let header = rest
                .strip_suffix(']')
                .ok_or(LoadError::Parse {
                    line: line_no,
                    msg: "unterminated section header".into(),
                })?
                .trim()
                .to_string();
            sections.push(Section {
                header,
                header_line: line_no,
                lines: Vec::new(),
            });
        } else {
            match sections.last_mut() {
                Some(s) => s.lines.push((line_no, line.to_string())),
                None => return perr(line_no, "content before the first section"),
            }
        }
    }
    if sections.is_empty() {
        return perr(1, "empty scenario file");
    }
    Ok(sections)
}

/// `key = value` split at the first `=`.
fn key_value(line: &str) -> Option<(&str, &str)> {
    line.find('=')
        .map(|k| (line[..k].trim(), line[k + 1..].trim()))
}

struct Loader {
    name: String,
    depth: usize,
    opens: Vec<String>,
    supports: Vec<Support>,
    restrictions: Vec<((usize, usize), Substitution)>,
}

impl Loader {
    fn open_index(&self, name: &str, line: usize) -> Result<u8, LoadError> {
        self.opens
            .iter()
            .position(|o| o == name)
            .map(|i| i as u8)
            .ok_or(LoadError::Parse {
                line,
                msg: format!("unknown open set '{name}'"),
            })
    }

    fn parse_tuple(&self, s: &str, line: usize) -> Result<Tuple, LoadError> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or(LoadError::Parse {
                line,
                msg: format!("expected a tuple like (U1,U2), found '{s}'"),
            })?;
        let mut ids = Vec::new();
        for part in inner.split(',') {
            ids.push(self.open_index(part.trim(), line)?);
        }
        if ids.is_empty() {
            return perr(line, "empty tuple");
        }
        Ok(Tuple(ids))
    }

    fn support_of_names(&self, names: &[&str], line: usize) -> Result<usize, LoadError> {
        let mut set = std::collections::BTreeSet::new();
        for n in names {
            set.insert(self.open_index(n, line)?);
        }
        self.supports
            .iter()
            .position(|s| s.indices == set)
            .ok_or(LoadError::Parse {
                line,
                msg: format!("no chart declared for {{{}}}", names.join(", ")),
            })
    }

    fn cover(&self) -> Cover {
        Cover {
            opens: self.opens.clone(),
            supports: self.supports.clone(),
            restrictions: self.restrictions.clone(),
            depth: self.depth,
        }
    }

    fn chart_of_tuple(&self, t: &Tuple, line: usize) -> Result<ChartRef, LoadError> {
        let set = t.support();
        self.supports
            .iter()
            .find(|s| s.indices == set)
            .map(|s| s.chart.clone())
            .ok_or(LoadError::Parse {
                line,
                msg: format!("tuple {t} has no declared chart"),
            })
    }
}

/// Parses `[a, b; c, d]` with the expression parser; `[]` takes any
/// zero-entry shape. The expected shape is enforced.
fn parse_matrix_forms(
    s: &str,
    chart: &ChartRef,
    rows: usize,
    cols: usize,
    line: usize,
) -> Result<Matrix<Form>, LoadError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or(LoadError::Parse {
            line,
            msg: format!("expected a matrix like [a, b; c, d], found '{s}'"),
        })?
        .trim();
    if inner.is_empty() {
        if rows * cols != 0 {
            return perr(line, format!("expected a {rows}x{cols} matrix, found []"));
        }
        return Ok(Matrix::zeros(rows, cols));
    }
    let mut data: Vec<Vec<Form>> = Vec::new();
    for row in inner.split(';') {
        let mut entries = Vec::new();
        for cell in split_top_level_commas(row) {
            let f = parse_form(cell.trim(), chart).map_err(|msg| LoadError::Parse {
                line,
                msg: format!("in matrix entry '{}': {msg}", cell.trim()),
            })?;
            entries.push(f);
        }
        data.push(entries);
    }
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return perr(
            line,
            format!(
                "matrix has shape {}x{}, expected {rows}x{cols}",
                data.len(),
                data.first().map(Vec::len).unwrap_or(0)
            ),
        );
    }
    Ok(Matrix::from_rows(data).expect("shape checked"))
}

/// Commas inside parentheses do not split matrix entries.
fn split_top_level_commas(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn parse_matrix_scalars(
    s: &str,
    chart: &ChartRef,
    rows: usize,
    cols: usize,
    line: usize,
    allow_t: bool,
) -> Result<Matrix<RatFunc>, LoadError> {
    let m = parse_matrix_forms(s, chart, rows, cols, line)?;
    m.try_map(|f| {
        let r = f
            .as_ratfunc()
            .cloned()
            .or(if f.is_zero() { Some(RatFunc::zero()) } else { None })
            .ok_or_else(|| cechweil::Error::ShapeMismatch("expected a scalar entry".into()))?;
        if !allow_t && r.has_t_vars() {
            return Err(cechweil::Error::ShapeMismatch(
                "simplex variables are not allowed here".into(),
            ));
        }
        Ok(r)
    })
    .map_err(|e| LoadError::Parse {
        line,
        msg: e.to_string(),
    })
}

pub fn load_str(text: &str) -> Result<Scenario, LoadError> {
    let sections = split_sections(text)?;
    let mut name = String::from("unnamed");
    let mut depth = 1usize;
    let mut loader = Loader {
        name: String::new(),
        depth: 1,
        opens: Vec::new(),
        supports: Vec::new(),
        restrictions: Vec::new(),
    };

    // pass 1: meta, opens, charts, restrictions (in file order)
    for sec in &sections {
        let words: Vec<&str> = sec.header.split_whitespace().collect();
        match words.first().copied() {
            Some("meta") => {
                for (ln, line) in &sec.lines {
                    let (k, v) = key_value(line)
                        .ok_or(LoadError::Parse {
                            line: *ln,
                            msg: "expected key = value".into(),
                        })?;
                    match k {
                        "name" => name = v.to_string(),
                        "depth" => {
                            depth = v.parse().map_err(|_| LoadError::Parse {
                                line: *ln,
                                msg: "depth must be a non-negative integer".into(),
                            })?
                        }
                        other => return perr(*ln, format!("unknown meta key '{other}'")),
                    }
                }
                loader.depth = depth;
                loader.name = name.clone();
            }
            Some("opens") => {
                for (ln, line) in &sec.lines {
                    if line.contains(|c: char| c.is_whitespace()) {
                        return perr(*ln, "one open-set name per line");
                    }
                    loader.opens.push(line.to_string());
                }
            }
            Some("chart") => {
                let names = &words[1..];
                if names.is_empty() {
                    return perr(sec.header_line, "chart needs at least one open");
                }
                let mut set = std::collections::BTreeSet::new();
                for n in names {
                    set.insert(loader.open_index(n, sec.header_line)?);
                }
                let mut vars: Vec<String> = Vec::new();
                let mut invertible_src: Vec<(usize, String)> = Vec::new();
                for (ln, line) in &sec.lines {
                    let (k, v) = key_value(line).ok_or(LoadError::Parse {
                        line: *ln,
                        msg: "expected key = value".into(),
                    })?;
                    match k {
                        "vars" => {
                            vars = v
                                .split(',')
                                .map(|s| s.trim().to_string())
                                .filter(|s| !s.is_empty())
                                .collect();
                        }
                        "invertible" => {
                            for part in v.split(',') {
                                let part = part.trim();
                                if !part.is_empty() {
                                    invertible_src.push((*ln, part.to_string()));
                                }
                            }
                        }
                        other => return perr(*ln, format!("unknown chart key '{other}'")),
                    }
                }
                for v in &vars {
                    let t_like = v.strip_prefix('t').map(|r| r.parse::<u8>().is_ok())
                        == Some(true)
                        || v.strip_prefix("dt").map(|r| r.parse::<u8>().is_ok()) == Some(true);
                    if t_like {
                        return perr(
                            sec.header_line,
                            format!("chart variable '{v}' collides with simplex coordinates"),
                        );
                    }
                }
                let chart_name = names.join("&");
                // parse invertible polynomials against a provisional chart
                let bare = Chart::new(
                    &chart_name,
                    &vars.iter().map(String::as_str).collect::<Vec<_>>(),
                    vec![],
                )?;
                let mut invertible = Vec::new();
                for (ln, src) in invertible_src {
                    let r = parse_scalar(&src, &bare).map_err(|msg| LoadError::Parse {
                        line: ln,
                        msg,
                    })?;
                    if r.has_t_vars() {
                        return perr(ln, "invertible polynomials must not involve t");
                    }
                    invertible.push(r.numerator().clone());
                }
                let chart = Chart::new(
                    &chart_name,
                    &vars.iter().map(String::as_str).collect::<Vec<_>>(),
                    invertible,
                )?;
                loader.supports.push(Support {
                    indices: set,
                    chart,
                });
            }
            Some("restrict") => {
                let joined = words[1..].join(" ");
                let parts: Vec<&str> = joined.split("->").collect();
                if parts.len() != 2 {
                    return perr(sec.header_line, "expected [restrict FROM -> TO]");
                }
                let from_names: Vec<&str> = parts[0].split_whitespace().collect();
                let to_names: Vec<&str> = parts[1].split_whitespace().collect();
                let from = loader.support_of_names(&from_names, sec.header_line)?;
                let to = loader.support_of_names(&to_names, sec.header_line)?;
                let from_chart = loader.supports[from].chart.clone();
                let to_chart = loader.supports[to].chart.clone();
                let mut images: Vec<Option<RatFunc>> = vec![None; from_chart.vars.len()];
                for (ln, line) in &sec.lines {
                    let (k, v) = key_value(line).ok_or(LoadError::Parse {
                        line: *ln,
                        msg: "expected var = image".into(),
                    })?;
                    let idx = from_chart.var_index(k).ok_or(LoadError::Parse {
                        line: *ln,
                        msg: format!("'{k}' is not a variable of {}", from_chart.name),
                    })?;
                    let img = parse_scalar(v, &to_chart).map_err(|msg| LoadError::Parse {
                        line: *ln,
                        msg,
                    })?;
                    images[idx as usize] = Some(img);
                }
                let images: Vec<RatFunc> = images
                    .into_iter()
                    .enumerate()
                    .map(|(i, img)| {
                        img.ok_or_else(|| LoadError::Validation(format!(
                            "restriction {} -> {} misses the image of '{}'",
                            from_chart.name, to_chart.name, from_chart.vars[i]
                        )))
                    })
                    .collect::<Result<_, _>>()?;
                loader.restrictions.push((
                    (from, to),
                    Substitution {
                        from: from_chart,
                        to: to_chart,
                        images,
                    },
                ));
            }
            _ => {}
        }
    }
    if loader.opens.is_empty() {
        return Err(LoadError::Validation("no [opens] section".into()));
    }
    let cover = loader.cover();
    cover.validate()?;

    // pass 2: complex / green / connections / witnesses / twisting / family
    let mut complex: Option<ComplexOnNerve> = None;
    let mut green: Option<GreenStructure> = None;
    let mut locals: Option<BTreeMap<u8, LocalConnection>> = None;
    let mut witness_spec = WitnessSpec::None;
    let mut explicit_witnesses: BTreeMap<usize, AdmissibilityWitness> = BTreeMap::new();
    let mut twisting: Option<TwistingCochain> = None;
    let mut family: Option<SimplicialFormFamily> = None;

    for sec in &sections {
        let head: Vec<&str> = sec.header.split_whitespace().collect();
        match head.first().copied() {
            Some("complex") | Some("bundle") => {
                complex = Some(load_complex(&loader, &cover, sec)?);
            }
            Some("green") | Some("green-structure") => {
                let cx = complex.as_ref().ok_or_else(|| {
                    LoadError::Validation("[green] must come after [complex]".into())
                })?;
                green = Some(load_green(&loader, cx, sec)?);
            }
            Some("connections") => {
                let cx = complex.as_ref().ok_or_else(|| {
                    LoadError::Validation("[connections] must come after [complex]".into())
                })?;
                locals = Some(load_connections(&loader, cx, sec)?);
            }
            Some("witnesses") => {
                let cx = complex.as_ref().ok_or_else(|| {
                    LoadError::Validation("[witnesses] must come after [complex]".into())
                })?;
                let (spec, explicit) = load_witnesses(&loader, cx, sec)?;
                witness_spec = spec;
                explicit_witnesses = explicit;
            }
            Some("twisting") => {
                twisting = Some(load_twisting(&loader, &cover, sec)?);
            }
            Some("family") => {
                family = Some(load_family(&loader, sec)?);
            }
            _ => {}
        }
    }

    // eager structural validation
    if let Some(cx) = &complex {
        let rep = cx.validate(&cover)?;
        if !rep.pass() {
            return Err(LoadError::Validation(format!(
                "complex is not well formed: {}",
                rep.first_violation().unwrap_or("unknown")
            )));
        }
        for level in &cx.levels {
            let rep = level.check_functorial(&cover)?;
            if !rep.pass() {
                return Err(LoadError::Validation(format!(
                    "transitions are not functorial: {}",
                    rep.first_violation().unwrap_or("unknown")
                )));
            }
        }
    }
    if let Some(tw) = &twisting {
        let rep = tw.validate(&cover)?;
        if !rep.pass() {
            return Err(LoadError::Validation(format!(
                "twisting data is not well formed: {}",
                rep.first_violation().unwrap_or("unknown")
            )));
        }
    }

    Ok(Scenario {
        name,
        cover,
        complex,
        green,
        locals,
        witness_spec,
        explicit_witnesses,
        twisting,
        family,
    })
}

fn load_complex(
    loader: &Loader,
    cover: &Cover,
    sec: &Section,
) -> Result<ComplexOnNerve, LoadError> {
    let mut stars = 1usize;
    let mut ranks: BTreeMap<Tuple, Vec<usize>> = BTreeMap::new();
    let mut d_lines: Vec<(usize, Tuple, usize, String)> = Vec::new();
    let mut t_lines: Vec<(usize, Tuple, usize, usize, String)> = Vec::new();
    for (ln, line) in &sec.lines {
        let (k, v) = key_value(line).ok_or(LoadError::Parse {
            line: *ln,
            msg: "expected key = value".into(),
        })?;
        let words: Vec<&str> = k.split_whitespace().collect();
        match words.first().copied() {
            Some("stars") => {
                stars = v.parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "stars must be a positive integer".into(),
                })?;
                if stars == 0 {
                    return perr(*ln, "stars must be at least 1");
                }
            }
            Some("rank") => {
                if words.len() != 2 {
                    return perr(*ln, "expected: rank (tuple) = r0 r1 …");
                }
                let t = loader.parse_tuple(words[1], *ln)?;
                let rs: Result<Vec<usize>, _> =
                    v.split_whitespace().map(str::parse::<usize>).collect();
                let rs = rs.map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "ranks must be non-negative integers".into(),
                })?;
                ranks.insert(t, rs);
            }
            Some("d") => {
                if words.len() != 3 {
                    return perr(*ln, "expected: d (tuple) s = [matrix]");
                }
                let t = loader.parse_tuple(words[1], *ln)?;
                let s: usize = words[2].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "internal degree must be an integer".into(),
                })?;
                d_lines.push((*ln, t, s, v.to_string()));
            }
            Some("t") => {
                if words.len() != 4 {
                    return perr(*ln, "expected: t (tuple) i s = [matrix]");
                }
                let t = loader.parse_tuple(words[1], *ln)?;
                let i: usize = words[2].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "coface index must be an integer".into(),
                })?;
                let s: usize = words[3].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "internal degree must be an integer".into(),
                })?;
                t_lines.push((*ln, t, i, s, v.to_string()));
            }
            other => return perr(*ln, format!("unknown [complex] entry '{other:?}'")),
        }
    }
    // every tuple needs a rank vector
    for p in 0..=cover.depth {
        for t in cover.tuples(p) {
            let rs = ranks.get(&t).ok_or_else(|| {
                LoadError::Validation(format!("missing rank for tuple {}", cover.render_tuple(&t)))
            })?;
            if rs.len() != stars {
                return Err(LoadError::Validation(format!(
                    "rank vector at {} has {} entries, expected {stars}",
                    cover.render_tuple(&t),
                    rs.len()
                )));
            }
        }
    }
    let mut levels: Vec<BundleOnNerve> = (0..stars).map(|_| BundleOnNerve::default()).collect();
    let mut diffs: BTreeMap<Tuple, Vec<Matrix<RatFunc>>> = BTreeMap::new();
    for p in 0..=cover.depth {
        for t in cover.tuples(p) {
            let rs = &ranks[&t];
            for (s, level) in levels.iter_mut().enumerate() {
                level.ranks.insert(t.clone(), rs[s]);
            }
            // default zero-sized differentials and transitions
            diffs.insert(
                t.clone(),
                (0..stars - 1)
                    .map(|s| Matrix::zeros(rs[s], rs[s + 1]))
                    .collect(),
            );
            if p >= 1 {
                for i in 0..=p {
                    let face = t.face(i).expect("in range");
                    let fr = &ranks[&face];
                    for (s, level) in levels.iter_mut().enumerate() {
                        level
                            .transitions
                            .insert((t.clone(), i), Matrix::zeros(rs[s], fr[s]));
                    }
                }
            }
        }
    }
    for (ln, t, s, src) in d_lines {
        let rs = &ranks[&t];
        if s + 1 >= stars {
            return perr(ln, format!("differential index {s} out of range"));
        }
        let chart = loader.chart_of_tuple(&t, ln)?;
        let m = parse_matrix_scalars(&src, &chart, rs[s], rs[s + 1], ln, false)?;
        diffs.get_mut(&t).expect("tuple known")[s] = m;
    }
    for (ln, t, i, s, src) in t_lines {
        if s >= stars {
            return perr(ln, format!("internal degree {s} out of range"));
        }
        if i > t.degree() {
            return perr(ln, format!("coface index {i} out of range"));
        }
        let face = t.face(i).expect("checked");
        let rs = &ranks[&t];
        let fr = ranks.get(&face).ok_or_else(|| LoadError::Parse {
            line: ln,
            msg: format!("face {face} has no rank"),
        })?;
        let chart = loader.chart_of_tuple(&t, ln)?;
        let m = parse_matrix_scalars(&src, &chart, rs[s], fr[s], ln, false)?;
        levels[s].transitions.insert((t.clone(), i), m);
    }
    // non-trivial shapes must have been given explicitly
    for p in 1..=cover.depth {
        for t in cover.tuples(p) {
            for i in 0..=p {
                let face = t.face(i).expect("in range");
                for s in 0..stars {
                    let m = levels[s].transition(&t, i)?;
                    if m.rows() * m.cols() > 0 && m.is_zero() && ranks[&t][s] == ranks[&face][s] {
                        // a square transition left at its zero default can
                        // never be a quasi-isomorphism
                        return Err(LoadError::Validation(format!(
                            "transition at {} face {i} level {s} is zero; supply a `t` line",
                            cover.render_tuple(&t)
                        )));
                    }
                }
            }
        }
    }
    Ok(ComplexOnNerve { levels, diffs })
}

fn parse_summands(
    loader: &Loader,
    v: &str,
    line: usize,
) -> Result<ElementaryWitness, LoadError> {
    let v = v.trim();
    if v == "none" {
        return Ok(ElementaryWitness::default());
    }
    let mut summands = Vec::new();
    for part in v.split(',') {
        // rank @ low : open / star
        let part = part.trim();
        let (rank_s, rest) = part.split_once('@').ok_or(LoadError::Parse {
            line,
            msg: "summand syntax: rank @ low : open / star".into(),
        })?;
        let (low_s, tag) = rest.split_once(':').ok_or(LoadError::Parse {
            line,
            msg: "summand syntax: rank @ low : open / star".into(),
        })?;
        let (open_s, star_s) = tag.split_once('/').ok_or(LoadError::Parse {
            line,
            msg: "summand syntax: rank @ low : open / star".into(),
        })?;
        let rank = rank_s.trim().parse().map_err(|_| LoadError::Parse {
            line,
            msg: "summand rank must be an integer".into(),
        })?;
        let low = low_s.trim().parse().map_err(|_| LoadError::Parse {
            line,
            msg: "summand low degree must be an integer".into(),
        })?;
        let tag_open = loader.open_index(open_s.trim(), line)?;
        let tag_star = star_s.trim().parse().map_err(|_| LoadError::Parse {
            line,
            msg: "summand tag degree must be an integer".into(),
        })?;
        summands.push(ElementarySummand {
            rank,
            low,
            tag_open,
            tag_star,
        });
    }
    Ok(ElementaryWitness { summands })
}

fn load_green(
    loader: &Loader,
    cx: &ComplexOnNerve,
    sec: &Section,
) -> Result<GreenStructure, LoadError> {
    let stars = cx.stars();
    let mut witnesses: BTreeMap<(Tuple, Tuple), ElementaryWitness> = BTreeMap::new();
    let mut s_lines: Vec<(usize, Tuple, Tuple, usize, String)> = Vec::new();
    let mut c_lines: Vec<(usize, Tuple, Tuple, Tuple, usize, String)> = Vec::new();
    for (ln, line) in &sec.lines {
        let (k, v) = key_value(line).ok_or(LoadError::Parse {
            line: *ln,
            msg: "expected key = value".into(),
        })?;
        let words: Vec<&str> = k.split_whitespace().collect();
        match words.first().copied() {
            Some("L") => {
                if words.len() != 3 {
                    return perr(*ln, "expected: L (alpha) (beta) = summands|none");
                }
                let alpha = loader.parse_tuple(words[1], *ln)?;
                let beta = loader.parse_tuple(words[2], *ln)?;
                witnesses.insert((alpha, beta), parse_summands(loader, v, *ln)?);
            }
            Some("S") => {
                if words.len() != 4 {
                    return perr(*ln, "expected: S (alpha) (beta) s = [matrix]");
                }
                let alpha = loader.parse_tuple(words[1], *ln)?;
                let beta = loader.parse_tuple(words[2], *ln)?;
                let s: usize = words[3].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "internal degree must be an integer".into(),
                })?;
                s_lines.push((*ln, alpha, beta, s, v.to_string()));
            }
            Some("C") => {
                if words.len() != 5 {
                    return perr(*ln, "expected: C (alpha) (beta) (gamma) s = [matrix]");
                }
                let alpha = loader.parse_tuple(words[1], *ln)?;
                let beta = loader.parse_tuple(words[2], *ln)?;
                let gamma = loader.parse_tuple(words[3], *ln)?;
                let s: usize = words[4].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "internal degree must be an integer".into(),
                })?;
                c_lines.push((*ln, alpha, beta, gamma, s, v.to_string()));
            }
            other => return perr(*ln, format!("unknown [green] entry '{other:?}'")),
        }
    }
    let mut gs = GreenStructure::default();
    // splittings default to the identity-shaped matrix when every entry is
    // forced (zero-size); otherwise S lines are required
    for ((alpha, beta), witness) in witnesses {
        let ranks_a = cx.ranks_at(&alpha)?;
        let ranks_b = cx.ranks_at(&beta)?;
        let mats: Vec<Matrix<RatFunc>> = (0..stars)
            .map(|s| Matrix::zeros(ranks_b[s] + witness.rank_at(s), ranks_a[s]))
            .collect();
        gs.splittings
            .insert((alpha, beta), Splitting { witness, mats });
    }
    for (ln, alpha, beta, s, src) in s_lines {
        let chart = loader.chart_of_tuple(&alpha, ln)?;
        let key = (alpha.clone(), beta.clone());
        let sp = gs.splittings.get_mut(&key).ok_or(LoadError::Parse {
            line: ln,
            msg: format!("S line for ({alpha}, {beta}) without a preceding L line"),
        })?;
        if s >= stars {
            return perr(ln, format!("internal degree {s} out of range"));
        }
        let rows = sp.mats[s].rows();
        let cols = sp.mats[s].cols();
        sp.mats[s] = parse_matrix_scalars(&src, &chart, rows, cols, ln, false)?;
    }
    for (ln, alpha, beta, gamma, s, src) in c_lines {
        let chart = loader.chart_of_tuple(&alpha, ln)?;
        let l_ag = gs
            .splittings
            .get(&(alpha.clone(), gamma.clone()))
            .ok_or(LoadError::Parse {
                line: ln,
                msg: format!("cocycle references missing splitting ({alpha}, {gamma})"),
            })?
            .witness
            .rank_at(s);
        let l_bg = gs
            .splittings
            .get(&(beta.clone(), gamma.clone()))
            .ok_or(LoadError::Parse {
                line: ln,
                msg: format!("cocycle references missing splitting ({beta}, {gamma})"),
            })?
            .witness
            .rank_at(s);
        let l_ab = gs
            .splittings
            .get(&(alpha.clone(), beta.clone()))
            .ok_or(LoadError::Parse {
                line: ln,
                msg: format!("cocycle references missing splitting ({alpha}, {beta})"),
            })?
            .witness
            .rank_at(s);
        let m = parse_matrix_scalars(&src, &chart, l_bg + l_ab, l_ag, ln, false)?;
        let key = (alpha, beta, gamma);
        let entry = gs
            .cocycles
            .entry(key)
            .or_insert_with(|| (0..stars).map(|_| Matrix::zeros(0, 0)).collect());
        entry[s] = m;
    }
    // default cocycles for chains whose witnesses are all zero-size
    Ok(gs)
}

fn load_connections(
    loader: &Loader,
    cx: &ComplexOnNerve,
    sec: &Section,
) -> Result<BTreeMap<u8, LocalConnection>, LoadError> {
    let stars = cx.stars();
    let mut out: BTreeMap<u8, LocalConnection> = BTreeMap::new();
    // defaults: zero matrices of the right rank
    for (open_idx, _) in loader.opens.iter().enumerate() {
        let t = Tuple(vec![open_idx as u8]);
        let ranks = cx.ranks_at(&t)?;
        out.insert(
            open_idx as u8,
            LocalConnection {
                mats: ranks.iter().map(|&r| Matrix::zeros(r, r)).collect(),
            },
        );
    }
    for (ln, line) in &sec.lines {
        let (k, v) = key_value(line).ok_or(LoadError::Parse {
            line: *ln,
            msg: "expected key = value".into(),
        })?;
        let words: Vec<&str> = k.split_whitespace().collect();
        if words.len() != 3 || words[0] != "local" {
            return perr(*ln, "expected: local <open> <s> = [matrix]");
        }
        let open = loader.open_index(words[1], *ln)?;
        let s: usize = words[2].parse().map_err(|_| LoadError::Parse {
            line: *ln,
            msg: "internal degree must be an integer".into(),
        })?;
        if s >= stars {
            return perr(*ln, format!("internal degree {s} out of range"));
        }
        let t = Tuple(vec![open]);
        let r = cx.ranks_at(&t)?[s];
        let chart = loader.chart_of_tuple(&t, *ln)?;
        let m = parse_matrix_forms(v, &chart, r, r, *ln)?;
        // entries must be base 1-forms without simplex dependence
        for row in 0..m.rows() {
            for col in 0..m.cols() {
                let f = m.at(row, col);
                let ok = f
                    .types()
                    .iter()
                    .all(|&(i, j)| i == 1 && j == 0)
                    && f.terms().all(|(_, c)| !c.has_t_vars());
                if !ok && !f.is_zero() {
                    return perr(
                        *ln,
                        "local connection entries must be base 1-forms without t",
                    );
                }
            }
        }
        out.get_mut(&open).expect("defaulted").mats[s] = m;
    }
    Ok(out)
}

fn load_witnesses(
    loader: &Loader,
    cx: &ComplexOnNerve,
    sec: &Section,
) -> Result<(WitnessSpec, BTreeMap<usize, AdmissibilityWitness>), LoadError> {
    let mut explicit: BTreeMap<usize, AdmissibilityWitness> = BTreeMap::new();
    let mut canonical = false;
    let mut saw_explicit = false;
    let mut pending: BTreeMap<(usize, Tuple, usize), (Option<Matrix<RatFunc>>, Option<Matrix<RatFunc>>)> =
        BTreeMap::new();
    for (ln, line) in &sec.lines {
        let (k, v) = key_value(line).ok_or(LoadError::Parse {
            line: *ln,
            msg: "expected key = value".into(),
        })?;
        let words: Vec<&str> = k.split_whitespace().collect();
        match words.first().copied() {
            Some("canonical") => {
                canonical = v.trim() == "true";
            }
            Some(kind @ ("A" | "B")) => {
                if words.len() != 4 {
                    return perr(*ln, "expected: A|B (tuple) i s = [matrix]");
                }
                let t = loader.parse_tuple(words[1], *ln)?;
                let i: usize = words[2].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "coface index must be an integer".into(),
                })?;
                let s: usize = words[3].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "internal degree must be an integer".into(),
                })?;
                if i > t.degree() || t.degree() == 0 {
                    return perr(*ln, "witness tuple/index out of range");
                }
                saw_explicit = true;
                let face = t.face(i).expect("checked");
                let (home, rank) = if kind == "A" {
                    (face.clone(), cx.ranks_at(&face)?[s])
                } else {
                    (t.clone(), cx.ranks_at(&t)?[s])
                };
                let chart = loader.chart_of_tuple(&home, *ln)?;
                // witness columns: any count ≤ rank; parse rows from text
                let m = parse_free_matrix(v, &chart, rank, *ln)?;
                let entry = pending.entry((s, t.clone(), i)).or_insert((None, None));
                if kind == "A" {
                    entry.0 = Some(m);
                } else {
                    entry.1 = Some(m);
                }
            }
            other => return perr(*ln, format!("unknown [witnesses] entry '{other:?}'")),
        }
    }
    if canonical && saw_explicit {
        return Err(LoadError::Validation(
            "choose either canonical witnesses or explicit ones, not both".into(),
        ));
    }
    if canonical {
        return Ok((WitnessSpec::Canonical, BTreeMap::new()));
    }
    if !saw_explicit {
        return Ok((WitnessSpec::None, BTreeMap::new()));
    }
    for ((s, t, i), (a, b)) in pending {
        let (a, b) = match (a, b) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(LoadError::Validation(format!(
                    "witness pair at {t} face {i} level {s} needs both A and B"
                )))
            }
        };
        explicit
            .entry(s)
            .or_default()
            .pairs
            .insert((t, i), WitnessPair { a_incl: a, b_incl: b });
    }
    Ok((WitnessSpec::Explicit, explicit))
}

/// Matrix with a fixed row count but free column count (witness inclusions).
fn parse_free_matrix(
    s: &str,
    chart: &ChartRef,
    rows: usize,
    line: usize,
) -> Result<Matrix<RatFunc>, LoadError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or(LoadError::Parse {
            line,
            msg: "expected a matrix".into(),
        })?
        .trim();
    if inner.is_empty() {
        return Ok(Matrix::zeros(rows, 0));
    }
    let mut data: Vec<Vec<RatFunc>> = Vec::new();
    for row in inner.split(';') {
        let mut entries = Vec::new();
        for cell in split_top_level_commas(row) {
            let f = parse_form(cell.trim(), chart).map_err(|msg| LoadError::Parse {
                line,
                msg,
            })?;
            let r = f
                .as_ratfunc()
                .cloned()
                .or(if f.is_zero() { Some(RatFunc::zero()) } else { None })
                .ok_or(LoadError::Parse {
                    line,
                    msg: "witness entries must be scalars".into(),
                })?;
            entries.push(r);
        }
        data.push(entries);
    }
    if data.len() != rows {
        return perr(line, format!("witness matrix needs {rows} rows"));
    }
    Matrix::from_rows(data).map_err(|e| LoadError::Parse {
        line,
        msg: e.to_string(),
    })
}

fn load_twisting(
    loader: &Loader,
    cover: &Cover,
    sec: &Section,
) -> Result<TwistingCochain, LoadError> {
    let mut ranks: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    let mut d_lines: Vec<(usize, u8, usize, String)> = Vec::new();
    let mut a_lines: Vec<(usize, Tuple, usize, String)> = Vec::new();
    for (ln, line) in &sec.lines {
        let (k, v) = key_value(line).ok_or(LoadError::Parse {
            line: *ln,
            msg: "expected key = value".into(),
        })?;
        let words: Vec<&str> = k.split_whitespace().collect();
        match words.first().copied() {
            Some("V") => {
                if words.len() != 2 {
                    return perr(*ln, "expected: V <open> = r0 r1 …");
                }
                let open = loader.open_index(words[1], *ln)?;
                let rs: Result<Vec<usize>, _> =
                    v.split_whitespace().map(str::parse::<usize>).collect();
                ranks.insert(
                    open,
                    rs.map_err(|_| LoadError::Parse {
                        line: *ln,
                        msg: "ranks must be integers".into(),
                    })?,
                );
            }
            Some("dV") => {
                if words.len() != 3 {
                    return perr(*ln, "expected: dV <open> <m> = [matrix]");
                }
                let open = loader.open_index(words[1], *ln)?;
                let m: usize = words[2].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "degree must be an integer".into(),
                })?;
                d_lines.push((*ln, open, m, v.to_string()));
            }
            Some("a") => {
                if words.len() != 3 {
                    return perr(*ln, "expected: a (tuple) <m> = [matrix]");
                }
                let t = loader.parse_tuple(words[1], *ln)?;
                let m: usize = words[2].parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "degree must be an integer".into(),
                })?;
                a_lines.push((*ln, t, m, v.to_string()));
            }
            other => return perr(*ln, format!("unknown [twisting] entry '{other:?}'")),
        }
    }
    let len = ranks.values().map(Vec::len).max().unwrap_or(0);
    if len == 0 {
        return Err(LoadError::Validation(
            "[twisting] needs at least one V line".into(),
        ));
    }
    for (open_idx, _) in loader.opens.iter().enumerate() {
        let rs = ranks.entry(open_idx as u8).or_default();
        rs.resize(len, 0);
    }
    let mut diffs: BTreeMap<u8, Vec<Matrix<RatFunc>>> = BTreeMap::new();
    for (open_idx, _) in loader.opens.iter().enumerate() {
        let open = open_idx as u8;
        let rs = &ranks[&open];
        diffs.insert(
            open,
            (0..len - 1).map(|m| Matrix::zeros(rs[m + 1], rs[m])).collect(),
        );
    }
    for (ln, open, m, src) in d_lines {
        if m + 1 >= len {
            return perr(ln, format!("differential degree {m} out of range"));
        }
        let rs = &ranks[&open];
        let chart = loader.chart_of_tuple(&Tuple(vec![open]), ln)?;
        let mat = parse_matrix_scalars(&src, &chart, rs[m + 1], rs[m], ln, false)?;
        diffs.get_mut(&open).expect("defaulted")[m] = mat;
    }
    let locals = LocalComplexFamily { len, ranks, diffs };
    let mut overrides: BTreeMap<Tuple, Vec<Matrix<RatFunc>>> = BTreeMap::new();
    for (ln, t, m, src) in a_lines {
        if m >= len {
            return perr(ln, format!("degree {m} out of range"));
        }
        let k = t.degree();
        let q = 1 - k as i64;
        let chart = loader.chart_of_tuple(&t, ln)?;
        let (rows, cols) = cechweil::twisting::component_shape(&locals, &t, q, m);
        let mat = parse_matrix_scalars(&src, &chart, rows, cols, ln, false)?;
        let entry = overrides.entry(t.clone()).or_insert_with(|| {
            (0..len)
                .map(|mm| {
                    let (r, c) = cechweil::twisting::component_shape(&locals, &t, q, mm);
                    if k == 1 && t.0[0] == t.0[1] {
                        debug_assert_eq!(r, c);
                        Matrix::identity(r)
                    } else {
                        Matrix::zeros(r, c)
                    }
                })
                .collect()
        });
        entry[m] = mat;
    }
    TwistingCochain::assemble(locals, &overrides, cover).map_err(LoadError::from)
}

fn load_family(loader: &Loader, sec: &Section) -> Result<SimplicialFormFamily, LoadError> {
    let mut degree: Option<usize> = None;
    let mut comps: BTreeMap<Tuple, Form> = BTreeMap::new();
    for (ln, line) in &sec.lines {
        let (k, v) = key_value(line).ok_or(LoadError::Parse {
            line: *ln,
            msg: "expected key = value".into(),
        })?;
        let words: Vec<&str> = k.split_whitespace().collect();
        match words.first().copied() {
            Some("degree") => {
                degree = Some(v.parse().map_err(|_| LoadError::Parse {
                    line: *ln,
                    msg: "degree must be an integer".into(),
                })?);
            }
            Some("omega") => {
                if words.len() != 2 {
                    return perr(*ln, "expected: omega (tuple) = <form>");
                }
                let t = loader.parse_tuple(words[1], *ln)?;
                let chart = loader.chart_of_tuple(&t, *ln)?;
                let f = parse_form(v, &chart).map_err(|msg| LoadError::Parse {
                    line: *ln,
                    msg,
                })?;
                comps.insert(t.clone(), f.with_degree(t.degree()));
            }
            other => return perr(*ln, format!("unknown [family] entry '{other:?}'")),
        }
    }
    let degree =
        degree.ok_or_else(|| LoadError::Validation("[family] needs a degree".into()))?;
    let mut fam = SimplicialFormFamily::new(degree);
    fam.components = comps;
    // absent components default to zero
    for p in 0..=loader.depth {
        for t in loader.cover().tuples(p) {
            fam.components
                .entry(t.clone())
                .or_insert_with(|| Form::zero().with_degree(t.degree()));
        }
    }
    Ok(fam)
}

/// Canonical renderer: loading the output reproduces the same in-memory
/// scenario. Sections appear in a fixed order with sorted keys.
pub fn render(sc: &Scenario) -> String {
    let mut out = String::new();
    let cover = &sc.cover;
    let namer_for = |chart: &ChartRef| {
        let chart = chart.clone();
        move |v: Var| -> String {
            match v {
                Var::Coord(i) => chart.var_name(i).to_string(),
                Var::T(i) => format!("t{i}"),
            }
        }
    };
    let render_scalar = |r: &RatFunc, chart: &ChartRef| -> String {
        r.render(&namer_for(chart))
    };
    let render_mat = |m: &Matrix<RatFunc>, chart: &ChartRef| -> String {
        cechweil::algebra::render_matrix(m, |r| render_scalar(r, chart))
    };
    let render_form_mat = |m: &Matrix<Form>, chart: &ChartRef| -> String {
        cechweil::algebra::render_matrix(m, |f| f.render(&namer_for(chart)))
    };
    let tuple_names = |t: &Tuple| cover.render_tuple(t);

    let _ = writeln!(out, "[meta]");
    let _ = writeln!(out, "name = {}", sc.name);
    let _ = writeln!(out, "depth = {}", cover.depth);
    let _ = writeln!(out, "\n[opens]");
    for o in &cover.opens {
        let _ = writeln!(out, "{o}");
    }
    for s in &cover.supports {
        let names: Vec<&str> = s
            .indices
            .iter()
            .map(|&i| cover.opens[i as usize].as_str())
            .collect();
        let _ = writeln!(out, "\n[chart {}]", names.join(" "));
        let _ = writeln!(out, "vars = {}", s.chart.vars.join(", "));
        if !s.chart.invertible.is_empty() {
            let rendered: Vec<String> = s
                .chart
                .invertible
                .iter()
                .map(|p| p.render(&namer_for(&s.chart)))
                .collect();
            let _ = writeln!(out, "invertible = {}", rendered.join(", "));
        }
    }
    for ((from, to), sub) in &cover.restrictions {
        let fname: Vec<&str> = cover.supports[*from]
            .indices
            .iter()
            .map(|&i| cover.opens[i as usize].as_str())
            .collect();
        let tname: Vec<&str> = cover.supports[*to]
            .indices
            .iter()
            .map(|&i| cover.opens[i as usize].as_str())
            .collect();
        let _ = writeln!(out, "\n[restrict {} -> {}]", fname.join(" "), tname.join(" "));
        for (i, img) in sub.images.iter().enumerate() {
            let _ = writeln!(
                out,
                "{} = {}",
                sub.from.vars[i],
                render_scalar(img, &sub.to)
            );
        }
    }

    if let Some(cx) = &sc.complex {
        let _ = writeln!(out, "\n[complex]");
        let _ = writeln!(out, "stars = {}", cx.stars());
        for p in 0..=cover.depth {
            for t in cover.tuples(p) {
                let ranks = cx.ranks_at(&t).expect("validated");
                let rs: Vec<String> = ranks.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "rank {} = {}", tuple_names(&t), rs.join(" "));
            }
        }
        for p in 0..=cover.depth {
            for t in cover.tuples(p) {
                let chart = cover.chart_of(&t).expect("validated");
                for s in 0..cx.stars() - 1 {
                    let d = cx.diff(&t, s).expect("validated");
                    if d.rows() * d.cols() > 0 {
                        let _ = writeln!(
                            out,
                            "d {} {s} = {}",
                            tuple_names(&t),
                            render_mat(d, chart)
                        );
                    }
                }
                if p >= 1 {
                    for i in 0..=p {
                        for (s, level) in cx.levels.iter().enumerate() {
                            let m = level.transition(&t, i).expect("validated");
                            if m.rows() * m.cols() > 0 {
                                let _ = writeln!(
                                    out,
                                    "t {} {i} {s} = {}",
                                    tuple_names(&t),
                                    render_mat(m, chart)
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    if let Some(gs) = &sc.green {
        let _ = writeln!(out, "\n[green]");
        for ((alpha, beta), sp) in &gs.splittings {
            let chart = cover.chart_of(alpha).expect("validated");
            let summands = if sp.witness.summands.is_empty() {
                "none".to_string()
            } else {
                sp.witness
                    .summands
                    .iter()
                    .map(|s| {
                        format!(
                            "{} @ {} : {} / {}",
                            s.rank, s.low, cover.opens[s.tag_open as usize], s.tag_star
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let _ = writeln!(
                out,
                "L {} {} = {summands}",
                tuple_names(alpha),
                tuple_names(beta)
            );
            for (s, m) in sp.mats.iter().enumerate() {
                if m.rows() * m.cols() > 0 {
                    let _ = writeln!(
                        out,
                        "S {} {} {s} = {}",
                        tuple_names(alpha),
                        tuple_names(beta),
                        render_mat(m, chart)
                    );
                }
            }
        }
        for ((alpha, beta, gamma), mats) in &gs.cocycles {
            let chart = cover.chart_of(alpha).expect("validated");
            for (s, m) in mats.iter().enumerate() {
                if m.rows() * m.cols() > 0 {
                    let _ = writeln!(
                        out,
                        "C {} {} {} {s} = {}",
                        tuple_names(alpha),
                        tuple_names(beta),
                        tuple_names(gamma),
                        render_mat(m, chart)
                    );
                }
            }
        }
    }

    if let Some(locals) = &sc.locals {
        let _ = writeln!(out, "\n[connections]");
        for (open, conn) in locals {
            let t = Tuple(vec![*open]);
            let chart = cover.chart_of(&t).expect("validated");
            for (s, m) in conn.mats.iter().enumerate() {
                if m.rows() * m.cols() > 0 {
                    let _ = writeln!(
                        out,
                        "local {} {s} = {}",
                        cover.opens[*open as usize],
                        render_form_mat(m, chart)
                    );
                }
            }
        }
    }

    match sc.witness_spec {
        WitnessSpec::Canonical => {
            let _ = writeln!(out, "\n[witnesses]");
            let _ = writeln!(out, "canonical = true");
        }
        WitnessSpec::Explicit => {
            let _ = writeln!(out, "\n[witnesses]");
            for (s, wit) in &sc.explicit_witnesses {
                for ((t, i), pair) in &wit.pairs {
                    let face = t.face(*i).expect("valid");
                    let chart_a = cover.chart_of(&face).expect("validated");
                    let chart_b = cover.chart_of(t).expect("validated");
                    let _ = writeln!(
                        out,
                        "A {} {i} {s} = {}",
                        tuple_names(t),
                        render_mat(&pair.a_incl, chart_a)
                    );
                    let _ = writeln!(
                        out,
                        "B {} {i} {s} = {}",
                        tuple_names(t),
                        render_mat(&pair.b_incl, chart_b)
                    );
                }
            }
        }
        WitnessSpec::None => {}
    }

    if let Some(tw) = &sc.twisting {
        let _ = writeln!(out, "\n[twisting]");
        for (open, rs) in &tw.locals.ranks {
            let rendered: Vec<String> = rs.iter().map(usize::to_string).collect();
            let _ = writeln!(
                out,
                "V {} = {}",
                cover.opens[*open as usize],
                rendered.join(" ")
            );
        }
        for (open, ds) in &tw.locals.diffs {
            let t = Tuple(vec![*open]);
            let chart = cover.chart_of(&t).expect("validated");
            for (m, d) in ds.iter().enumerate() {
                if d.rows() * d.cols() > 0 {
                    let _ = writeln!(
                        out,
                        "dV {} {m} = {}",
                        cover.opens[*open as usize],
                        render_mat(d, chart)
                    );
                }
            }
        }
        for fam in &tw.components {
            for (t, mats) in fam {
                let k = t.degree();
                let chart = cover.chart_of(t).expect("validated");
                let is_default = if k == 1 && t.0[0] == t.0[1] {
                    mats.iter().all(|m| *m == Matrix::identity(m.rows()))
                } else {
                    mats.iter().all(Matrix::is_zero)
                };
                if is_default {
                    continue;
                }
                for (m, mat) in mats.iter().enumerate() {
                    if mat.rows() * mat.cols() > 0 {
                        let _ = writeln!(
                            out,
                            "a {} {m} = {}",
                            tuple_names(t),
                            render_mat(mat, chart)
                        );
                    }
                }
            }
        }
    }

    if let Some(fam) = &sc.family {
        let _ = writeln!(out, "\n[family]");
        let _ = writeln!(out, "degree = {}", fam.degree);
        for (t, f) in &fam.components {
            if !f.is_zero() {
                let chart = cover.chart_of(t).expect("validated");
                let _ = writeln!(
                    out,
                    "omega {} = {}",
                    tuple_names(t),
                    f.render(&namer_for(chart))
                );
            }
        }
    }

    out
}

pub fn load_file(path: &std::path::Path) -> Result<Scenario, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        LoadError::Validation(format!("cannot read {}: {e}", path.display()))
    })?;
    load_str(&text)
}
