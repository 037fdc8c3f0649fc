//! Canonical dataset schema: parse, validate, and write line-delimited
//! records, and adapt foreign annotation exports into the canonical form.
//!
//! A canonical file holds one JSON record per line, UTF-8, with coordinates
//! written as decimals at four fractional digits:
//!
//! ```text
//! {"poster_id":"p1","page":[1000.0000,1414.0000],"boxes":[{"id":1,...}],"order":[0,1],"parent":{"1":0}}
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::layout::{BBox, Category, LayoutTree, NodeId, Poster, ROOT};

/// One box entry of a canonical record.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalBox {
    pub id: NodeId,
    pub category: Category,
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

/// The canonical serialized form of one annotated poster.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalRecord {
    pub poster_id: String,
    pub page_w: f64,
    pub page_h: f64,
    pub boxes: Vec<CanonicalBox>,
    pub order: Vec<NodeId>,
    pub parent: BTreeMap<NodeId, NodeId>,
}

impl CanonicalRecord {
    pub fn from_parts(poster: &Poster, tree: &LayoutTree) -> CanonicalRecord {
        CanonicalRecord {
            poster_id: poster.poster_id.clone(),
            page_w: poster.page_w,
            page_h: poster.page_h,
            boxes: poster
                .boxes()
                .iter()
                .map(|b| CanonicalBox {
                    id: b.id,
                    category: b.category,
                    cx: b.cx,
                    cy: b.cy,
                    w: b.w,
                    h: b.h,
                })
                .collect(),
            order: tree.order().to_vec(),
            parent: tree.parent_map(),
        }
    }

    /// Validate into domain objects.
    pub fn into_poster_tree(self) -> Result<(Poster, LayoutTree), String> {
        let boxes: Vec<BBox> = self
            .boxes
            .into_iter()
            .map(|b| BBox {
                id: b.id,
                cx: b.cx,
                cy: b.cy,
                w: b.w,
                h: b.h,
                category: b.category,
            })
            .collect();
        let n = boxes.len();
        let poster = Poster::new(self.poster_id, self.page_w, self.page_h, boxes)
            .map_err(|e| e.to_string())?;
        let tree =
            LayoutTree::build(&self.order, &self.parent, n).map_err(|e| e.to_string())?;
        Ok((poster, tree))
    }

    /// Serialize as one canonical line (no trailing newline). Boxes are
    /// emitted sorted by id and parent keys in ascending order, so writing is
    /// byte-stable.
    pub fn to_line(&self) -> String {
        let mut out = String::with_capacity(128 + self.boxes.len() * 96);
        let id_json =
            serde_json::to_string(&self.poster_id).expect("string serializes");
        write!(
            out,
            "{{\"poster_id\":{id_json},\"page\":[{:.4},{:.4}],\"boxes\":[",
            self.page_w, self.page_h
        )
        .unwrap();
        let mut boxes: Vec<&CanonicalBox> = self.boxes.iter().collect();
        boxes.sort_by_key(|b| b.id);
        for (k, b) in boxes.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(
                out,
                "{{\"id\":{},\"category\":\"{}\",\"cx\":{:.4},\"cy\":{:.4},\"w\":{:.4},\"h\":{:.4}}}",
                b.id,
                b.category.name(),
                b.cx,
                b.cy,
                b.w,
                b.h
            )
            .unwrap();
        }
        out.push_str("],\"order\":[");
        for (k, id) in self.order.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{id}").unwrap();
        }
        out.push_str("],\"parent\":{");
        for (k, (child, parent)) in self.parent.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "\"{child}\":{parent}").unwrap();
        }
        out.push_str("}}");
        out
    }

    pub fn parse_line(line: &str) -> Result<CanonicalRecord, String> {
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        raw.into_canonical()
    }
}

#[derive(Deserialize)]
struct RawRecord {
    poster_id: String,
    page: Vec<f64>,
    boxes: Vec<RawBox>,
    order: Vec<i64>,
    parent: BTreeMap<String, i64>,
}

#[derive(Deserialize)]
struct RawBox {
    id: i64,
    category: String,
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
}

impl RawRecord {
    fn into_canonical(self) -> Result<CanonicalRecord, String> {
        if self.page.len() != 2 {
            return Err(format!("'page' must hold [width, height], got {} values", self.page.len()));
        }
        let boxes = self
            .boxes
            .into_iter()
            .map(|b| {
                let category = Category::parse(&b.category)
                    .ok_or_else(|| format!("unknown category {:?}", b.category))?;
                if category == Category::Root {
                    return Err(format!("box {} uses the reserved Root category", b.id));
                }
                let id = usize::try_from(b.id)
                    .map_err(|_| format!("box id {} is negative", b.id))?;
                Ok(CanonicalBox {
                    id,
                    category,
                    cx: b.cx,
                    cy: b.cy,
                    w: b.w,
                    h: b.h,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let order = self
            .order
            .into_iter()
            .map(|v| usize::try_from(v).map_err(|_| format!("order entry {v} is negative")))
            .collect::<Result<Vec<_>, String>>()?;
        let parent = self
            .parent
            .into_iter()
            .map(|(k, v)| {
                let child: usize = k
                    .parse()
                    .map_err(|_| format!("parent key {k:?} is not an id"))?;
                let parent = usize::try_from(v)
                    .map_err(|_| format!("parent of {k} is negative"))?;
                Ok((child, parent))
            })
            .collect::<Result<BTreeMap<_, _>, String>>()?;
        Ok(CanonicalRecord {
            poster_id: self.poster_id,
            page_w: self.page[0],
            page_h: self.page[1],
            boxes,
            order,
            parent,
        })
    }
}

/// A named dataset split with validated posters and their ground-truth trees.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSplit {
    pub name: String,
    pub posters: Vec<(Poster, LayoutTree)>,
    /// Soft diagnostics: out-of-page centers, structurally trivial posters.
    pub warnings: Vec<Diagnostic>,
}

/// Locates a problem in an input file.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    /// 1-based line number in the source file.
    pub line: usize,
    pub poster_id: Option<String>,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.poster_id {
            Some(id) => write!(f, "line {} (poster {}): {}", self.line, id, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(Diagnostic),
    #[error("{} invalid record(s):\n{}", .0.len(), fmt_diags(.0))]
    Validation(Vec<Diagnostic>),
    #[error("empty split: {path} holds no records")]
    EmptySplit { path: PathBuf },
}

fn fmt_diags(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl IngestError {
    /// All diagnostics carried by this error, for machine-readable output.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            IngestError::Parse(d) => vec![d.clone()],
            IngestError::Validation(ds) => ds.clone(),
            _ => Vec::new(),
        }
    }
}

/// Resolve a data path: a file is used as-is, a directory expects
/// `<split>.jsonl` inside.
pub fn split_file(path: &Path, split: &str) -> PathBuf {
    if path.is_dir() {
        path.join(format!("{split}.jsonl"))
    } else {
        path.to_path_buf()
    }
}

/// Load and validate one split. Validation failures are collected per record
/// and reported in bulk; `strict` fails on the first problem instead.
pub fn load_split(path: &Path, split: &str, strict: bool) -> Result<DatasetSplit, IngestError> {
    let file_path = split_file(path, split);
    let file = std::fs::File::open(&file_path).map_err(|source| IngestError::Io {
        path: file_path.clone(),
        source,
    })?;
    let mut split_data = read_split(file, split, strict).map_err(|e| match e {
        // Attach the path to the empty-split case; line-level errors carry
        // their own locators.
        IngestError::EmptySplit { .. } => IngestError::EmptySplit { path: file_path },
        other => other,
    })?;
    split_data.name = split.to_string();
    Ok(split_data)
}

/// Load a split from any reader (used by `load_split` and tests).
pub fn read_split<R: Read>(reader: R, name: &str, strict: bool) -> Result<DatasetSplit, IngestError> {
    let reader = BufReader::new(reader);
    let mut posters: Vec<(Poster, LayoutTree)> = Vec::new();
    let mut errors: Vec<Diagnostic> = Vec::new();
    let mut warnings: Vec<Diagnostic> = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| IngestError::Io {
            path: PathBuf::from(format!("<{name}> line {line_no}"),),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record = match CanonicalRecord::parse_line(&line) {
            Ok(r) => r,
            Err(message) => {
                let diag = Diagnostic {
                    line: line_no,
                    poster_id: None,
                    message,
                };
                if strict {
                    return Err(IngestError::Parse(diag));
                }
                errors.push(diag);
                continue;
            }
        };
        let poster_id = record.poster_id.clone();
        if !seen_ids.insert(poster_id.clone()) {
            let diag = Diagnostic {
                line: line_no,
                poster_id: Some(poster_id),
                message: "duplicate poster id within split".into(),
            };
            if strict {
                return Err(IngestError::Validation(vec![diag]));
            }
            errors.push(diag);
            continue;
        }
        match record.into_poster_tree() {
            Ok((poster, tree)) => {
                for w in poster.boundary_warnings() {
                    warnings.push(Diagnostic {
                        line: line_no,
                        poster_id: Some(poster.poster_id.clone()),
                        message: w,
                    });
                }
                if tree.is_structurally_trivial() {
                    warnings.push(Diagnostic {
                        line: line_no,
                        poster_id: Some(poster.poster_id.clone()),
                        message: "structurally trivial poster (at most one box)".into(),
                    });
                }
                posters.push((poster, tree));
            }
            Err(message) => {
                let diag = Diagnostic {
                    line: line_no,
                    poster_id: Some(poster_id),
                    message,
                };
                if strict {
                    return Err(IngestError::Validation(vec![diag]));
                }
                errors.push(diag);
            }
        }
    }
    if !errors.is_empty() {
        return Err(IngestError::Validation(errors));
    }
    if posters.is_empty() {
        return Err(IngestError::EmptySplit {
            path: PathBuf::from(name),
        });
    }
    Ok(DatasetSplit {
        name: name.to_string(),
        posters,
        warnings,
    })
}

/// Write a split in canonical form, one record per line, input order.
pub fn write_split(split: &DatasetSplit, path: &Path) -> Result<(), IngestError> {
    let file = std::fs::File::create(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = std::io::BufWriter::new(file);
    write_split_to(split, &mut w).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_split_to<W: Write>(split: &DatasetSplit, w: &mut W) -> std::io::Result<()> {
    for (poster, tree) in &split.posters {
        let record = CanonicalRecord::from_parts(poster, tree);
        writeln!(w, "{}", record.to_line())?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// External-format adapter
// ---------------------------------------------------------------------------

/// Geometry field mapping of a foreign export.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum GeometryMapping {
    /// Corner form `(x1, y1, x2, y2)`; converted to center form.
    Corner {
        x1: String,
        y1: String,
        x2: String,
        y2: String,
    },
    /// Already center form `(cx, cy, w, h)`.
    Center {
        cx: String,
        cy: String,
        w: String,
        h: String,
    },
}

/// Field-name mapping from a foreign annotation payload to the canonical
/// schema. Configuration-driven: the published dataset's exact field names
/// are external to this artifact, so nothing is hard-coded.
#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct AdapterConfig {
    pub poster_id: String,
    pub page_w: String,
    pub page_h: String,
    pub boxes: String,
    pub box_id: String,
    pub box_category: String,
    pub geometry: GeometryMapping,
    /// Field holding the reading order as a list of external box ids
    /// (without the Root).
    pub order: String,
    /// Field holding the child-to-parent map over external box ids.
    pub parent: String,
    /// Parent value denoting the Root (for example `-1` or `null`).
    #[serde(default)]
    pub root_parent: serde_json::Value,
    /// Extra category spellings, applied before the built-in normalization.
    #[serde(default)]
    pub category_aliases: HashMap<String, String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum AdaptError {
    #[error("missing field {field:?} in {context}")]
    MissingField { field: String, context: String },
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("bad value for {field:?}: {message}")]
    BadValue { field: String, message: String },
}

fn get<'v>(
    obj: &'v serde_json::Value,
    field: &str,
    context: &str,
) -> Result<&'v serde_json::Value, AdaptError> {
    obj.get(field).ok_or_else(|| AdaptError::MissingField {
        field: field.to_string(),
        context: context.to_string(),
    })
}

fn get_f64(obj: &serde_json::Value, field: &str, context: &str) -> Result<f64, AdaptError> {
    get(obj, field, context)?
        .as_f64()
        .ok_or_else(|| AdaptError::BadValue {
            field: field.to_string(),
            message: "expected a number".into(),
        })
}

/// External ids may be numbers or strings; normalize to a key.
fn id_key(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Convert one foreign annotation payload into a canonical record. Box ids
/// are remapped to dense `1..=N` in array order; corner geometry becomes
/// center form; category strings are normalized case-insensitively.
pub fn adapt_external(
    raw: &serde_json::Value,
    cfg: &AdapterConfig,
) -> Result<CanonicalRecord, AdaptError> {
    let poster_id = get(raw, &cfg.poster_id, "record")?
        .as_str()
        .map(str::to_string)
        .unwrap_or_else(|| id_key(get(raw, &cfg.poster_id, "record").expect("just fetched")));
    let page_w = get_f64(raw, &cfg.page_w, "record")?;
    let page_h = get_f64(raw, &cfg.page_h, "record")?;
    let raw_boxes = get(raw, &cfg.boxes, "record")?
        .as_array()
        .ok_or_else(|| AdaptError::BadValue {
            field: cfg.boxes.clone(),
            message: "expected an array".into(),
        })?;

    let mut ext_to_canonical: HashMap<String, NodeId> = HashMap::new();
    let mut boxes = Vec::with_capacity(raw_boxes.len());
    for (k, rb) in raw_boxes.iter().enumerate() {
        let context = format!("box {k}");
        let ext_id = id_key(get(rb, &cfg.box_id, &context)?);
        let canonical_id = k + 1;
        ext_to_canonical.insert(ext_id, canonical_id);
        let cat_raw = get(rb, &cfg.box_category, &context)?
            .as_str()
            .ok_or_else(|| AdaptError::BadValue {
                field: cfg.box_category.clone(),
                message: "expected a string".into(),
            })?;
        let aliased = cfg
            .category_aliases
            .get(cat_raw)
            .map(String::as_str)
            .unwrap_or(cat_raw);
        let category = Category::parse(aliased)
            .filter(|c| *c != Category::Root)
            .ok_or_else(|| AdaptError::UnknownCategory(cat_raw.to_string()))?;
        let (cx, cy, w, h) = match &cfg.geometry {
            GeometryMapping::Corner { x1, y1, x2, y2 } => {
                let (x1v, y1v) = (get_f64(rb, x1, &context)?, get_f64(rb, y1, &context)?);
                let (x2v, y2v) = (get_f64(rb, x2, &context)?, get_f64(rb, y2, &context)?);
                (
                    (x1v + x2v) / 2.0,
                    (y1v + y2v) / 2.0,
                    x2v - x1v,
                    y2v - y1v,
                )
            }
            GeometryMapping::Center { cx, cy, w, h } => (
                get_f64(rb, cx, &context)?,
                get_f64(rb, cy, &context)?,
                get_f64(rb, w, &context)?,
                get_f64(rb, h, &context)?,
            ),
        };
        boxes.push(CanonicalBox {
            id: canonical_id,
            category,
            cx,
            cy,
            w,
            h,
        });
    }

    let lookup = |ext: &serde_json::Value, field: &str| -> Result<NodeId, AdaptError> {
        let key = id_key(ext);
        ext_to_canonical
            .get(&key)
            .copied()
            .ok_or_else(|| AdaptError::BadValue {
                field: field.to_string(),
                message: format!("references unknown box id {key:?}"),
            })
    };

    let raw_order = get(raw, &cfg.order, "record")?
        .as_array()
        .ok_or_else(|| AdaptError::BadValue {
            field: cfg.order.clone(),
            message: "expected an array".into(),
        })?;
    let mut order = Vec::with_capacity(raw_order.len() + 1);
    order.push(ROOT);
    for v in raw_order {
        order.push(lookup(v, &cfg.order)?);
    }

    let raw_parent = get(raw, &cfg.parent, "record")?
        .as_object()
        .ok_or_else(|| AdaptError::BadValue {
            field: cfg.parent.clone(),
            message: "expected an object".into(),
        })?;
    let mut parent = BTreeMap::new();
    for (child_ext, parent_val) in raw_parent {
        let child = ext_to_canonical
            .get(child_ext)
            .copied()
            .ok_or_else(|| AdaptError::BadValue {
                field: cfg.parent.clone(),
                message: format!("references unknown box id {child_ext:?}"),
            })?;
        let parent_id = if *parent_val == cfg.root_parent {
            ROOT
        } else {
            lookup(parent_val, &cfg.parent)?
        };
        parent.insert(child, parent_id);
    }

    Ok(CanonicalRecord {
        poster_id,
        page_w,
        page_h,
        boxes,
        order,
        parent,
    })
}
