//! Problem-file parsing.
//!
//! The format is line-based: `key = value` pairs grouped under `[section]`
//! headers, `#` starts a comment.  Sections may carry a label, e.g.
//! `[element A]` or `[point q]`.  Unknown sections and keys are errors, as
//! are duplicates.  Series values use the same syntax the library prints:
//! `3/2*t^-1 + 1 + t^2 + O(t^5)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use orbidisc::degree::{LeviDecomposition, LineData, ParabolicBundle, PointDatum, SplitBundle};
use orbidisc::element::LieAlgebraElement;
use orbidisc::matrix::LaurentMatrix;
use orbidisc::parabolic::ParabolicLocalDatum;
use orbidisc::rational::{parse_rational, Rational};
use orbidisc::roots::{Coweight, RootSystem};
use orbidisc::series::{LaurentSeries, Variable};

#[derive(Debug, Clone)]
pub struct ProblemError {
    pub line: usize,
    pub col: Option<usize>,
    pub msg: String,
}

impl ProblemError {
    fn new(line: usize, msg: impl Into<String>) -> Self {
        ProblemError { line, col: None, msg: msg.into() }
    }

    fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ProblemError { line, col: Some(col), msg: msg.into() }
    }
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.col {
            Some(c) => write!(f, "line {}, col {}: {}", self.line, c, self.msg),
            None => write!(f, "line {}: {}", self.line, self.msg),
        }
    }
}

type PResult<T> = std::result::Result<T, ProblemError>;

/// A raw `key = value` pair with its location.
#[derive(Debug, Clone)]
struct KeyVal {
    line: usize,
    key: String,
    value: String,
    value_col: usize,
}

#[derive(Debug, Clone)]
struct RawSection {
    line: usize,
    name: String,
    label: Option<String>,
    pairs: Vec<KeyVal>,
}

/// A series value, still unparsed because the variable is chosen by a
/// sibling key.
#[derive(Debug, Clone)]
pub struct SeriesText {
    pub line: usize,
    pub col: usize,
    pub text: String,
}

impl SeriesText {
    fn parse(&self, var: Variable) -> PResult<LaurentSeries> {
        LaurentSeries::parse(&self.text, var)
            .map_err(|e| ProblemError::at(self.line, self.col + e.col - 1, e.msg))
    }
}

#[derive(Debug, Clone)]
pub struct RootSysSec {
    pub line: usize,
    pub kind: String,
    pub n: Option<usize>,
    pub cartan_dim: Option<usize>,
    pub roots: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone)]
pub struct CoweightSec {
    pub line: usize,
    pub r: u32,
    pub theta: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct ElementSec {
    pub line: usize,
    pub label: Option<String>,
    pub var: char,
    pub r: Option<u32>,
    pub cartan: Vec<(usize, SeriesText)>,
    pub roots: Vec<(Vec<i64>, SeriesText)>,
}

#[derive(Debug, Clone)]
pub struct MatrixSec {
    pub line: usize,
    pub label: Option<String>,
    pub var: char,
    pub r: Option<u32>,
    pub n: usize,
    pub entries: Vec<((usize, usize), SeriesText)>,
}

#[derive(Debug, Clone)]
pub struct ParabSec {
    pub line: usize,
    pub r: u32,
    pub p: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct BundleSec {
    pub line: usize,
    pub rank: usize,
    pub degree: i64,
}

#[derive(Debug, Clone)]
pub struct PointSec {
    pub line: usize,
    pub label: String,
    pub r: u32,
    pub p: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct SummandSec {
    pub line: usize,
    pub label: String,
    pub degree: i64,
    pub weights: Vec<(String, Rational)>,
}

#[derive(Debug, Clone)]
pub struct DecompSec {
    pub line: usize,
    pub label: String,
    pub blocks: Vec<Vec<String>>,
    pub characters: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct SeriesSec {
    pub line: usize,
    pub label: Option<String>,
    pub var: char,
    pub r: Option<u32>,
    pub value: SeriesText,
}

#[derive(Debug, Clone, Default)]
pub struct ProblemFile {
    pub truncation: Option<i64>,
    pub genus: Option<u32>,
    pub rootsys: Option<RootSysSec>,
    pub coweight: Option<CoweightSec>,
    pub elements: Vec<ElementSec>,
    pub matrices: Vec<MatrixSec>,
    pub parab: Option<ParabSec>,
    pub bundle: Option<BundleSec>,
    pub points: Vec<PointSec>,
    pub summands: Vec<SummandSec>,
    pub decompositions: Vec<DecompSec>,
    pub series: Vec<SeriesSec>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-')
}

/// Splits a bracketed list at top-level commas: "[a, [b, c], d]" yields
/// ["a", "[b, c]", "d"].  An empty list "[]" yields no items.
fn split_list(line: usize, value: &str) -> PResult<Vec<String>> {
    let v = value.trim();
    if !v.starts_with('[') || !v.ends_with(']') {
        return Err(ProblemError::new(line, format!("expected a [..] list, found '{v}'")));
    }
    let inner = &v[1..v.len() - 1];
    let mut items = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| ProblemError::new(line, "unbalanced brackets"))?;
            }
            ',' if depth == 0 => {
                items.push(inner[start..i].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(ProblemError::new(line, "unbalanced brackets"));
    }
    let last = inner[start..].trim();
    if !last.is_empty() {
        items.push(last.to_string());
    } else if !items.is_empty() {
        return Err(ProblemError::new(line, "trailing comma in list"));
    }
    Ok(items)
}

fn parse_int<T: std::str::FromStr>(line: usize, value: &str, what: &str) -> PResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| ProblemError::new(line, format!("invalid {what}: '{}'", value.trim())))
}

fn parse_rat(line: usize, value: &str) -> PResult<Rational> {
    parse_rational(value.trim())
        .ok_or_else(|| ProblemError::new(line, format!("invalid rational: '{}'", value.trim())))
}

fn parse_i64_list(line: usize, value: &str) -> PResult<Vec<i64>> {
    split_list(line, value)?
        .iter()
        .map(|item| parse_int::<i64>(line, item, "integer"))
        .collect()
}

fn parse_u32_list(line: usize, value: &str) -> PResult<Vec<u32>> {
    split_list(line, value)?
        .iter()
        .map(|item| parse_int::<u32>(line, item, "weight"))
        .collect()
}

fn parse_rat_list(line: usize, value: &str) -> PResult<Vec<Rational>> {
    split_list(line, value)?.iter().map(|item| parse_rat(line, item)).collect()
}

fn parse_nested_i64(line: usize, value: &str) -> PResult<Vec<Vec<i64>>> {
    split_list(line, value)?
        .iter()
        .map(|item| parse_i64_list(line, item))
        .collect()
}

fn parse_label_blocks(line: usize, value: &str) -> PResult<Vec<Vec<String>>> {
    split_list(line, value)?
        .iter()
        .map(|item| {
            let labels = split_list(line, item)?;
            for l in &labels {
                if !valid_label(l) {
                    return Err(ProblemError::new(line, format!("invalid label '{l}'")));
                }
            }
            Ok(labels)
        })
        .collect()
}

/// `h[3]` -> 3
fn key_cartan(key: &str) -> Option<usize> {
    let inner = key.strip_prefix("h[")?.strip_suffix(']')?;
    inner.parse().ok()
}

/// `x[[1,-1]]` -> [1, -1]
fn key_root(key: &str) -> Option<Vec<i64>> {
    let inner = key.strip_prefix("x[[")?.strip_suffix("]]")?;
    inner.split(',').map(|part| part.trim().parse().ok()).collect()
}

/// `omega[2][1]` -> (2, 1)
fn key_entry(key: &str) -> Option<(usize, usize)> {
    let inner = key.strip_prefix("omega[")?;
    let (i, rest) = inner.split_once(']')?;
    let j = rest.strip_prefix('[')?.strip_suffix(']')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

/// `weight[q]` -> "q"
fn key_weight(key: &str) -> Option<String> {
    let inner = key.strip_prefix("weight[")?.strip_suffix(']')?;
    valid_label(inner).then(|| inner.to_string())
}

/// Pulls the raw pairs apart, rejecting unknown and duplicate keys.
/// Structured keys (h[..], x[[..]], omega[..][..], weight[..]) are matched
/// by the `patterns` list.
struct SectionReader {
    line: usize,
    pairs: Vec<KeyVal>,
    taken: Vec<bool>,
}

impl SectionReader {
    fn new(raw: &RawSection) -> Self {
        SectionReader { line: raw.line, pairs: raw.pairs.clone(), taken: vec![false; raw.pairs.len()] }
    }

    fn optional(&mut self, key: &str) -> PResult<Option<KeyVal>> {
        let mut found: Option<KeyVal> = None;
        for (i, kv) in self.pairs.iter().enumerate() {
            if kv.key == key {
                if found.is_some() {
                    return Err(ProblemError::new(kv.line, format!("duplicate key '{key}'")));
                }
                self.taken[i] = true;
                found = Some(kv.clone());
            }
        }
        Ok(found)
    }

    fn required(&mut self, key: &str) -> PResult<KeyVal> {
        self.optional(key)?
            .ok_or_else(|| ProblemError::new(self.line, format!("missing key '{key}'")))
    }

    /// All pairs whose key matches the pattern parser.
    fn matching<T>(&mut self, f: impl Fn(&str) -> Option<T>) -> Vec<(T, KeyVal)> {
        let mut out = Vec::new();
        for (i, kv) in self.pairs.iter().enumerate() {
            if self.taken[i] {
                continue;
            }
            if let Some(t) = f(&kv.key) {
                self.taken[i] = true;
                out.push((t, kv.clone()));
            }
        }
        out
    }

    fn finish(self) -> PResult<()> {
        for (i, kv) in self.pairs.iter().enumerate() {
            if !self.taken[i] {
                return Err(ProblemError::new(kv.line, format!("unknown key '{}'", kv.key)));
            }
        }
        Ok(())
    }
}

fn series_text(kv: &KeyVal) -> SeriesText {
    SeriesText { line: kv.line, col: kv.value_col, text: kv.value.clone() }
}

fn var_kind(kv: &KeyVal) -> PResult<char> {
    match kv.value.trim() {
        "t" => Ok('t'),
        "z" => Ok('z'),
        other => Err(ProblemError::new(kv.line, format!("var must be 't' or 'z', found '{other}'"))),
    }
}

impl ProblemFile {
    pub fn parse(input: &str) -> PResult<ProblemFile> {
        let mut top: Vec<KeyVal> = Vec::new();
        let mut sections: Vec<RawSection> = Vec::new();

        for (i, raw_line) in input.lines().enumerate() {
            let line_no = i + 1;
            let stripped = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let text = stripped.trim();
            if text.is_empty() {
                continue;
            }
            if text.starts_with('[') {
                if !text.ends_with(']') {
                    return Err(ProblemError::new(line_no, "unterminated section header"));
                }
                let inner = text[1..text.len() - 1].trim();
                let (name, label) = match inner.split_once(char::is_whitespace) {
                    Some((n, l)) => (n.to_string(), Some(l.trim().to_string())),
                    None => (inner.to_string(), None),
                };
                if let Some(l) = &label {
                    if !valid_label(l) {
                        return Err(ProblemError::new(line_no, format!("invalid label '{l}'")));
                    }
                }
                sections.push(RawSection { line: line_no, name, label, pairs: Vec::new() });
                continue;
            }
            let eq = text.find('=').ok_or_else(|| {
                ProblemError::new(line_no, format!("expected 'key = value', found '{text}'"))
            })?;
            let key = text[..eq].trim().to_string();
            if key.is_empty() {
                return Err(ProblemError::new(line_no, "empty key"));
            }
            let value = text[eq + 1..].trim().to_string();
            if value.is_empty() {
                return Err(ProblemError::new(line_no, format!("key '{key}' has no value")));
            }
            // column of the value within the original line, 1-based
            let after_eq = stripped.find('=').unwrap() + 1;
            let value_col = stripped[after_eq..]
                .find(|c: char| !c.is_whitespace())
                .map(|off| after_eq + off + 1)
                .unwrap_or(after_eq + 1);
            let kv = KeyVal { line: line_no, key, value, value_col };
            match sections.last_mut() {
                Some(sec) => sec.pairs.push(kv),
                None => top.push(kv),
            }
        }

        let mut file = ProblemFile::default();

        // top-level keys
        {
            let raw = RawSection { line: 1, name: String::new(), label: None, pairs: top };
            let mut r = SectionReader::new(&raw);
            if let Some(kv) = r.optional("truncation")? {
                file.truncation = Some(parse_int(kv.line, &kv.value, "truncation order")?);
            }
            if let Some(kv) = r.optional("genus")? {
                file.genus = Some(parse_int(kv.line, &kv.value, "genus")?);
            }
            r.finish()?;
        }

        for raw in &sections {
            match raw.name.as_str() {
                "rootsys" => {
                    if file.rootsys.is_some() {
                        return Err(ProblemError::new(raw.line, "duplicate [rootsys] section"));
                    }
                    file.rootsys = Some(Self::read_rootsys(raw)?);
                }
                "coweight" => {
                    if file.coweight.is_some() {
                        return Err(ProblemError::new(raw.line, "duplicate [coweight] section"));
                    }
                    file.coweight = Some(Self::read_coweight(raw)?);
                }
                "element" => file.elements.push(Self::read_element(raw)?),
                "matrix" => file.matrices.push(Self::read_matrix(raw)?),
                "parab" => {
                    if file.parab.is_some() {
                        return Err(ProblemError::new(raw.line, "duplicate [parab] section"));
                    }
                    file.parab = Some(Self::read_parab(raw)?);
                }
                "bundle" => {
                    if file.bundle.is_some() {
                        return Err(ProblemError::new(raw.line, "duplicate [bundle] section"));
                    }
                    file.bundle = Some(Self::read_bundle(raw)?);
                }
                "point" => file.points.push(Self::read_point(raw)?),
                "summand" => file.summands.push(Self::read_summand(raw)?),
                "decomposition" => file.decompositions.push(Self::read_decomposition(raw)?),
                "series" => file.series.push(Self::read_series(raw)?),
                other => {
                    return Err(ProblemError::new(raw.line, format!("unknown section [{other}]")))
                }
            }
        }

        for secs in [&file.elements.iter().map(|s| (s.line, &s.label)).collect::<Vec<_>>(),
                     &file.matrices.iter().map(|s| (s.line, &s.label)).collect::<Vec<_>>(),
                     &file.series.iter().map(|s| (s.line, &s.label)).collect::<Vec<_>>()]
        {
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for (line, label) in secs.iter() {
                if let Some(l) = label {
                    if !seen.insert(l.as_str()) {
                        return Err(ProblemError::new(*line, format!("duplicate label '{l}'")));
                    }
                }
            }
        }
        {
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for pt in &file.points {
                if !seen.insert(pt.label.as_str()) {
                    return Err(ProblemError::new(pt.line, format!("duplicate point '{}'", pt.label)));
                }
            }
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for s in &file.summands {
                if !seen.insert(s.label.as_str()) {
                    return Err(ProblemError::new(s.line, format!("duplicate summand '{}'", s.label)));
                }
            }
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for d in &file.decompositions {
                if !seen.insert(d.label.as_str()) {
                    return Err(ProblemError::new(d.line, format!("duplicate decomposition '{}'", d.label)));
                }
            }
        }

        Ok(file)
    }

    fn read_rootsys(raw: &RawSection) -> PResult<RootSysSec> {
        if raw.label.is_some() {
            return Err(ProblemError::new(raw.line, "[rootsys] takes no label"));
        }
        let mut r = SectionReader::new(raw);
        let kind_kv = r.required("type")?;
        let kind = kind_kv.value.trim().to_string();
        let mut sec = RootSysSec { line: raw.line, kind, n: None, cartan_dim: None, roots: None };
        match sec.kind.as_str() {
            "sl" | "gl" => {
                let kv = r.required("n")?;
                sec.n = Some(parse_int(kv.line, &kv.value, "rank")?);
            }
            "custom" => {
                let kv = r.required("cartan_dim")?;
                sec.cartan_dim = Some(parse_int(kv.line, &kv.value, "Cartan dimension")?);
                let kv = r.required("roots")?;
                sec.roots = Some(parse_nested_i64(kv.line, &kv.value)?);
            }
            other => {
                return Err(ProblemError::new(
                    kind_kv.line,
                    format!("type must be sl, gl, or custom, found '{other}'"),
                ))
            }
        }
        r.finish()?;
        Ok(sec)
    }

    fn read_coweight(raw: &RawSection) -> PResult<CoweightSec> {
        if raw.label.is_some() {
            return Err(ProblemError::new(raw.line, "[coweight] takes no label"));
        }
        let mut r = SectionReader::new(raw);
        let kv = r.required("r")?;
        let order = parse_int::<u32>(kv.line, &kv.value, "order r")?;
        let kv = r.required("theta")?;
        let theta = parse_rat_list(kv.line, &kv.value)?;
        r.finish()?;
        Ok(CoweightSec { line: raw.line, r: order, theta })
    }

    fn read_element(raw: &RawSection) -> PResult<ElementSec> {
        let mut r = SectionReader::new(raw);
        let var = var_kind(&r.required("var")?)?;
        let order = match r.optional("r")? {
            Some(kv) => Some(parse_int(kv.line, &kv.value, "order r")?),
            None => None,
        };
        let cartan = r
            .matching(key_cartan)
            .into_iter()
            .map(|(m, kv)| (m, series_text(&kv)))
            .collect();
        let roots = r
            .matching(key_root)
            .into_iter()
            .map(|(alpha, kv)| (alpha, series_text(&kv)))
            .collect();
        r.finish()?;
        Ok(ElementSec { line: raw.line, label: raw.label.clone(), var, r: order, cartan, roots })
    }

    fn read_matrix(raw: &RawSection) -> PResult<MatrixSec> {
        let mut r = SectionReader::new(raw);
        let var = var_kind(&r.required("var")?)?;
        let order = match r.optional("r")? {
            Some(kv) => Some(parse_int(kv.line, &kv.value, "order r")?),
            None => None,
        };
        let kv = r.required("n")?;
        let n: usize = parse_int(kv.line, &kv.value, "size")?;
        if n == 0 {
            return Err(ProblemError::new(kv.line, "size must be positive"));
        }
        let entries: Vec<((usize, usize), SeriesText)> = r
            .matching(key_entry)
            .into_iter()
            .map(|(ij, kv)| (ij, series_text(&kv)))
            .collect();
        r.finish()?;
        for ((i, j), st) in &entries {
            if *i == 0 || *j == 0 || *i > n || *j > n {
                return Err(ProblemError::new(
                    st.line,
                    format!("entry omega[{i}][{j}] is outside the {n}x{n} matrix"),
                ));
            }
        }
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for ((i, j), st) in &entries {
            if !seen.insert((*i, *j)) {
                return Err(ProblemError::new(st.line, format!("duplicate entry omega[{i}][{j}]")));
            }
        }
        Ok(MatrixSec { line: raw.line, label: raw.label.clone(), var, r: order, n, entries })
    }

    fn read_parab(raw: &RawSection) -> PResult<ParabSec> {
        if raw.label.is_some() {
            return Err(ProblemError::new(raw.line, "[parab] takes no label"));
        }
        let mut r = SectionReader::new(raw);
        let kv = r.required("r")?;
        let order = parse_int::<u32>(kv.line, &kv.value, "order r")?;
        let kv = r.required("p")?;
        let p = parse_u32_list(kv.line, &kv.value)?;
        r.finish()?;
        Ok(ParabSec { line: raw.line, r: order, p })
    }

    fn read_bundle(raw: &RawSection) -> PResult<BundleSec> {
        if raw.label.is_some() {
            return Err(ProblemError::new(raw.line, "[bundle] takes no label"));
        }
        let mut r = SectionReader::new(raw);
        let kv = r.required("rank")?;
        let rank = parse_int(kv.line, &kv.value, "rank")?;
        let kv = r.required("degree")?;
        let degree = parse_int(kv.line, &kv.value, "degree")?;
        r.finish()?;
        Ok(BundleSec { line: raw.line, rank, degree })
    }

    fn read_point(raw: &RawSection) -> PResult<PointSec> {
        let label = raw
            .label
            .clone()
            .ok_or_else(|| ProblemError::new(raw.line, "[point] needs a label, e.g. [point q]"))?;
        let mut r = SectionReader::new(raw);
        let kv = r.required("r")?;
        let order = parse_int::<u32>(kv.line, &kv.value, "order r")?;
        let kv = r.required("p")?;
        let p = parse_u32_list(kv.line, &kv.value)?;
        r.finish()?;
        Ok(PointSec { line: raw.line, label, r: order, p })
    }

    fn read_summand(raw: &RawSection) -> PResult<SummandSec> {
        let label = raw.label.clone().ok_or_else(|| {
            ProblemError::new(raw.line, "[summand] needs a label, e.g. [summand L1]")
        })?;
        let mut r = SectionReader::new(raw);
        let kv = r.required("degree")?;
        let degree = parse_int(kv.line, &kv.value, "degree")?;
        let weights = r
            .matching(key_weight)
            .into_iter()
            .map(|(pt, kv)| Ok((pt, parse_rat(kv.line, &kv.value)?)))
            .collect::<PResult<Vec<_>>>()?;
        r.finish()?;
        Ok(SummandSec { line: raw.line, label, degree, weights })
    }

    fn read_decomposition(raw: &RawSection) -> PResult<DecompSec> {
        let label = raw.label.clone().ok_or_else(|| {
            ProblemError::new(raw.line, "[decomposition] needs a label")
        })?;
        let mut r = SectionReader::new(raw);
        let kv = r.required("blocks")?;
        let blocks = parse_label_blocks(kv.line, &kv.value)?;
        let characters = match r.optional("characters")? {
            Some(kv) => parse_nested_i64(kv.line, &kv.value)?,
            None => Vec::new(),
        };
        r.finish()?;
        Ok(DecompSec { line: raw.line, label, blocks, characters })
    }

    fn read_series(raw: &RawSection) -> PResult<SeriesSec> {
        let mut r = SectionReader::new(raw);
        let var = var_kind(&r.required("var")?)?;
        let order = match r.optional("r")? {
            Some(kv) => Some(parse_int(kv.line, &kv.value, "order r")?),
            None => None,
        };
        let kv = r.required("value")?;
        let value = series_text(&kv);
        r.finish()?;
        Ok(SeriesSec { line: raw.line, label: raw.label.clone(), var, r: order, value })
    }

    /// File truncation combined with the command-line override (the minimum
    /// wins).
    pub fn effective_truncation(&self, cli: Option<i64>) -> Option<i64> {
        match (self.truncation, cli) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Fallback chain for the variable order of series-carrying sections.
    fn order_fallback(&self, explicit: Option<u32>) -> u32 {
        explicit
            .or(self.coweight.as_ref().map(|c| c.r))
            .or(self.parab.as_ref().map(|p| p.r))
            .unwrap_or(1)
    }

    fn matrix_order_fallback(&self, explicit: Option<u32>) -> u32 {
        explicit
            .or(self.parab.as_ref().map(|p| p.r))
            .or(self.coweight.as_ref().map(|c| c.r))
            .unwrap_or(1)
    }

    pub fn require_rootsys(&self) -> PResult<Arc<RootSystem>> {
        let sec = self
            .rootsys
            .as_ref()
            .ok_or_else(|| ProblemError::new(1, "a [rootsys] section is required"))?;
        let built = match sec.kind.as_str() {
            "sl" => RootSystem::sl(sec.n.unwrap()),
            "gl" => RootSystem::gl(sec.n.unwrap()),
            _ => RootSystem::custom("custom", sec.cartan_dim.unwrap(), sec.roots.clone().unwrap()),
        };
        built.map_err(|e| ProblemError::new(sec.line, e.to_string()))
    }

    pub fn require_coweight(&self, sys: &Arc<RootSystem>) -> PResult<Coweight> {
        let sec = self
            .coweight
            .as_ref()
            .ok_or_else(|| ProblemError::new(1, "a [coweight] section is required"))?;
        Coweight::new(sys.clone(), sec.r, sec.theta.clone())
            .map_err(|e| ProblemError::new(sec.line, e.to_string()))
    }

    /// The single element section, or the one with the given label.
    pub fn find_element(&self, label: Option<&str>) -> PResult<&ElementSec> {
        match label {
            Some(want) => self
                .elements
                .iter()
                .find(|e| e.label.as_deref() == Some(want))
                .ok_or_else(|| ProblemError::new(1, format!("no [element {want}] section"))),
            None => match self.elements.len() {
                0 => Err(ProblemError::new(1, "an [element] section is required")),
                1 => Ok(&self.elements[0]),
                _ => Err(ProblemError::new(
                    self.elements[1].line,
                    "several [element] sections; this command takes one",
                )),
            },
        }
    }

    pub fn find_matrix(&self, label: Option<&str>) -> PResult<&MatrixSec> {
        match label {
            Some(want) => self
                .matrices
                .iter()
                .find(|m| m.label.as_deref() == Some(want))
                .ok_or_else(|| ProblemError::new(1, format!("no [matrix {want}] section"))),
            None => match self.matrices.len() {
                0 => Err(ProblemError::new(1, "a [matrix] section is required")),
                1 => Ok(&self.matrices[0]),
                _ => Err(ProblemError::new(
                    self.matrices[1].line,
                    "several [matrix] sections; this command takes one",
                )),
            },
        }
    }

    pub fn find_series(&self, label: Option<&str>) -> PResult<&SeriesSec> {
        match label {
            Some(want) => self
                .series
                .iter()
                .find(|s| s.label.as_deref() == Some(want))
                .ok_or_else(|| ProblemError::new(1, format!("no [series {want}] section"))),
            None => match self.series.len() {
                0 => Err(ProblemError::new(1, "a [series] section is required")),
                1 => Ok(&self.series[0]),
                _ => Err(ProblemError::new(
                    self.series[1].line,
                    "several [series] sections; this command takes one",
                )),
            },
        }
    }

    pub fn build_series(&self, sec: &SeriesSec, trunc: Option<i64>) -> PResult<LaurentSeries> {
        let order = self.order_fallback(sec.r);
        let var = if sec.var == 't' { Variable::t(order) } else { Variable::z(order) };
        let s = sec.value.parse(var)?;
        Ok(match trunc {
            Some(n) => s.truncated(n),
            None => s,
        })
    }

    /// Assembles an element over the given root system.  When a truncation
    /// is in force, unspecified slots become zero-up-to-it rather than
    /// exact zeros.
    pub fn build_element(
        &self,
        sec: &ElementSec,
        sys: &Arc<RootSystem>,
        trunc: Option<i64>,
    ) -> PResult<LieAlgebraElement> {
        let order = self.order_fallback(sec.r);
        let var = if sec.var == 't' { Variable::t(order) } else { Variable::z(order) };
        let blank = |v: Variable| match trunc {
            Some(n) => LaurentSeries::zero_truncated(v, n),
            None => LaurentSeries::zero(v),
        };
        let clip = |s: LaurentSeries| match trunc {
            Some(n) => s.truncated(n),
            None => s,
        };

        let mut cartan = vec![blank(var); sys.cartan_dim()];
        for (m, st) in &sec.cartan {
            if *m == 0 || *m > sys.cartan_dim() {
                return Err(ProblemError::new(
                    st.line,
                    format!("h[{m}] is out of range; the Cartan has dimension {}", sys.cartan_dim()),
                ));
            }
            cartan[*m - 1] = clip(st.parse(var)?);
        }
        let mut roots: Vec<(usize, LaurentSeries)> = Vec::new();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for (alpha, st) in &sec.roots {
            let idx = sys.root_index(alpha).ok_or_else(|| {
                ProblemError::new(st.line, format!("{alpha:?} is not a root of {}", sys.name()))
            })?;
            if !seen.insert(idx) {
                return Err(ProblemError::new(st.line, format!("duplicate root slot {alpha:?}")));
            }
            roots.push((idx, clip(st.parse(var)?)));
        }
        if trunc.is_some() {
            for idx in 0..sys.root_count() {
                if !seen.contains(&idx) {
                    roots.push((idx, blank(var)));
                }
            }
        }
        LieAlgebraElement::new(sys.clone(), var, cartan, roots)
            .map_err(|e| ProblemError::new(sec.line, e.to_string()))
    }

    pub fn build_matrix(&self, sec: &MatrixSec, trunc: Option<i64>) -> PResult<LaurentMatrix> {
        let order = self.matrix_order_fallback(sec.r);
        let var = if sec.var == 't' { Variable::t(order) } else { Variable::z(order) };
        let blank = match trunc {
            Some(n) => LaurentSeries::zero_truncated(var, n),
            None => LaurentSeries::zero(var),
        };
        let mut entries = vec![blank; sec.n * sec.n];
        for ((i, j), st) in &sec.entries {
            let s = st.parse(var)?;
            entries[(i - 1) * sec.n + (j - 1)] = match trunc {
                Some(n) => s.truncated(n),
                None => s,
            };
        }
        Ok(LaurentMatrix::new(sec.n, entries))
    }

    pub fn require_parab(&self) -> PResult<ParabolicLocalDatum> {
        let sec = self
            .parab
            .as_ref()
            .ok_or_else(|| ProblemError::new(1, "a [parab] section is required"))?;
        ParabolicLocalDatum::new(sec.r, sec.p.clone())
            .map_err(|e| ProblemError::new(sec.line, e.to_string()))
    }

    pub fn require_bundle(&self) -> PResult<ParabolicBundle> {
        let sec = self
            .bundle
            .as_ref()
            .ok_or_else(|| ProblemError::new(1, "a [bundle] section is required"))?;
        let mut points = Vec::with_capacity(self.points.len());
        for pt in &self.points {
            let datum = ParabolicLocalDatum::new(pt.r, pt.p.clone())
                .map_err(|e| ProblemError::new(pt.line, e.to_string()))?;
            points.push(PointDatum { label: pt.label.clone(), datum });
        }
        ParabolicBundle::new(sec.rank, sec.degree, points)
            .map_err(|e| ProblemError::new(sec.line, e.to_string()))
    }

    pub fn build_split(&self) -> PResult<SplitBundle> {
        let lines = self
            .summands
            .iter()
            .map(|s| LineData {
                label: s.label.clone(),
                degree: s.degree,
                weights: s.weights.iter().cloned().collect(),
            })
            .collect();
        SplitBundle::new(lines)
            .map_err(|e| ProblemError::new(self.summands.first().map_or(1, |s| s.line), e.to_string()))
    }

    pub fn build_decompositions(&self, split: &SplitBundle) -> PResult<Vec<LeviDecomposition>> {
        let mut out = Vec::with_capacity(self.decompositions.len());
        for sec in &self.decompositions {
            let mut partition: Vec<Vec<usize>> = Vec::with_capacity(sec.blocks.len());
            for block in &sec.blocks {
                let mut part = Vec::with_capacity(block.len());
                for label in block {
                    let idx = split
                        .lines()
                        .iter()
                        .position(|l| &l.label == label)
                        .ok_or_else(|| {
                            ProblemError::new(sec.line, format!("no summand '{label}'"))
                        })?;
                    part.push(idx);
                }
                partition.push(part);
            }
            let mut d = LeviDecomposition::from_split(split, &partition);
            d.name = sec.label.clone();
            d.extra_characters = sec.characters.clone();
            out.push(d);
        }
        Ok(out)
    }
}
