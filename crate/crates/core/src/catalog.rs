//! Block templates, loaded from the checked-in catalog file `data/blocks.json`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Color, Diagram, ExchangeMatrix, Matrix, Skewsymmetrizer};

pub const CATALOG_SOURCE: &str = include_str!("../data/blocks.json");

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum BlockKind {
    Spike,
    Triangle,
    Infork,
    Outfork,
    Diamond,
    Square,
    Ia,
    Ib,
    II,
    IIIa,
    IIIb,
    IV,
    V,
}

impl BlockKind {
    pub const ALL: [BlockKind; 13] = [
        BlockKind::Spike,
        BlockKind::Triangle,
        BlockKind::Infork,
        BlockKind::Outfork,
        BlockKind::Diamond,
        BlockKind::Square,
        BlockKind::Ia,
        BlockKind::Ib,
        BlockKind::II,
        BlockKind::IIIa,
        BlockKind::IIIb,
        BlockKind::IV,
        BlockKind::V,
    ];

    /// Blocks that carry a weight-2 edge and a doubled node.
    pub fn is_new(self) -> bool {
        self as usize >= BlockKind::Ia as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Spike => "Spike",
            BlockKind::Triangle => "Triangle",
            BlockKind::Infork => "Infork",
            BlockKind::Outfork => "Outfork",
            BlockKind::Diamond => "Diamond",
            BlockKind::Square => "Square",
            BlockKind::Ia => "Ia",
            BlockKind::Ib => "Ib",
            BlockKind::II => "II",
            BlockKind::IIIa => "IIIa",
            BlockKind::IIIb => "IIIb",
            BlockKind::IV => "IV",
            BlockKind::V => "V",
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BlockKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown block kind '{}'", s)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateNode {
    pub name: String,
    pub color: Color,
    /// Size of the node's index set in the unfolding.
    pub copies: usize,
}

/// Unfolding of a block: `nodes[i]` folds onto template node `folds_to[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockUnfolding {
    pub labels: Vec<String>,
    pub folds_to: Vec<usize>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTemplate {
    pub kind: BlockKind,
    pub nodes: Vec<TemplateNode>,
    /// `(tail, head, weight)` over template node indices.
    pub edges: Vec<(usize, usize, u64)>,
    pub faces: Vec<[usize; 3]>,
    pub orbifold_points: u32,
    pub provisional: bool,
    pub unfolding: BlockUnfolding,
    /// Node permutations preserving edges and colors, identity first.
    pub automorphisms: Vec<Vec<usize>>,
}

impl BlockTemplate {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_white(&self, i: usize) -> bool {
        self.nodes[i].color == Color::White
    }

    /// Signed weight from `a` to `b` inside the template.
    pub fn signed(&self, a: usize, b: usize) -> i64 {
        for &(t, h, w) in &self.edges {
            if (t, h) == (a, b) {
                return w as i64;
            }
            if (t, h) == (b, a) {
                return -(w as i64);
            }
        }
        0
    }

    pub fn diagram(&self) -> Diagram {
        let mut d = Diagram::new(self.size());
        for (i, n) in self.nodes.iter().enumerate() {
            d.set_color(i, n.color);
        }
        for &(t, h, w) in &self.edges {
            d.set_signed(t, h, w as i64);
        }
        d
    }

    pub fn symmetrizer(&self) -> Skewsymmetrizer {
        Skewsymmetrizer(self.nodes.iter().map(|n| n.copies as i64).collect())
    }

    /// Exchange matrix of the block with `d_i` equal to the node's copy count.
    pub fn matrix(&self) -> ExchangeMatrix {
        let n = self.size();
        let mut m = Matrix::zeros(n);
        for &(t, h, w) in &self.edges {
            let (bth, bht) =
                realize_edge(w, self.nodes[t].copies as i64, self.nodes[h].copies as i64)
                    .expect("catalog edges are validated at load time");
            m.set(t, h, bth);
            m.set(h, t, bht);
        }
        ExchangeMatrix::from_parts(m, self.symmetrizer())
    }

    pub fn conjugate_pairs(&self) -> u32 {
        self.nodes.iter().filter(|n| n.copies == 2).count() as u32
    }
}

/// Entries `(b_th, b_ht)` of an edge `t → h` of weight `w` for the symmetrizer values `dt`, `dh`.
pub fn realize_edge(w: u64, dt: i64, dh: i64) -> Option<(i64, i64)> {
    // b_th^2 = w·dt/dh and b_ht = −w / b_th
    let num = (w as i64).checked_mul(dt)?;
    if num % dh != 0 {
        return None;
    }
    let sq = num / dh;
    let r = (sq as f64).sqrt().round() as i64;
    if r <= 0 || r * r != sq || (w as i64) % r != 0 {
        return None;
    }
    Some((r, -(w as i64) / r))
}

#[derive(Deserialize)]
struct RawCatalog {
    format: String,
    version: u32,
    blocks: Vec<RawBlock>,
}

#[derive(Deserialize)]
struct RawBlock {
    kind: String,
    nodes: Vec<(String, String, usize)>,
    edges: Vec<(String, String, u64)>,
    faces: Vec<(String, String, String)>,
    orbifold_points: u32,
    #[serde(default)]
    provisional: bool,
    #[serde(default)]
    unfolding: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub version: u32,
    blocks: Vec<BlockTemplate>,
}

impl Catalog {
    pub fn get(&self, kind: BlockKind) -> &BlockTemplate {
        &self.blocks[kind as usize]
    }

    pub fn blocks(&self) -> &[BlockTemplate] {
        &self.blocks
    }

    pub fn parse(src: &str) -> Result<Catalog> {
        let raw: RawCatalog = serde_json::from_str(src)
            .map_err(|e| Error::Config(format!("block catalog: {}", e)))?;
        if raw.format != "sdecomp-blocks" || raw.version != 1 {
            return Err(Error::Config(format!(
                "unsupported block catalog {} v{}",
                raw.format, raw.version
            )));
        }
        let mut blocks: Vec<BlockTemplate> = Vec::new();
        for rb in raw.blocks {
            blocks.push(build_template(rb)?);
        }
        blocks.sort_by_key(|b| b.kind);
        let kinds: Vec<BlockKind> = blocks.iter().map(|b| b.kind).collect();
        if kinds != BlockKind::ALL {
            return Err(Error::Config(
                "block catalog must list every block kind exactly once".into(),
            ));
        }
        Ok(Catalog {
            version: raw.version,
            blocks,
        })
    }
}

fn cfg(kind: &str, msg: impl fmt::Display) -> Error {
    Error::Config(format!("block {}: {}", kind, msg))
}

fn build_template(rb: RawBlock) -> Result<BlockTemplate> {
    let kind: BlockKind = rb.kind.parse()?;
    let k = rb.kind.as_str();
    let mut nodes = Vec::new();
    for (name, color, copies) in &rb.nodes {
        let color = match color.as_str() {
            "white" => Color::White,
            "black" => Color::Black,
            other => return Err(cfg(k, format!("bad color '{}'", other))),
        };
        if !(1..=2).contains(copies) {
            return Err(cfg(k, "copies must be 1 or 2"));
        }
        nodes.push(TemplateNode {
            name: name.clone(),
            color,
            copies: *copies,
        });
    }
    let idx = |s: &str| -> Result<usize> {
        nodes
            .iter()
            .position(|n| n.name == s)
            .ok_or_else(|| cfg(k, format!("unknown node '{}'", s)))
    };
    let mut edges = Vec::new();
    for (t, h, w) in &rb.edges {
        let (t, h) = (idx(t)?, idx(h)?);
        if realize_edge(*w, nodes[t].copies as i64, nodes[h].copies as i64).is_none() {
            return Err(cfg(
                k,
                format!("edge weight {} incompatible with copies", w),
            ));
        }
        edges.push((t, h, *w));
    }
    let mut faces = Vec::new();
    for (a, b, c) in &rb.faces {
        faces.push([idx(a)?, idx(b)?, idx(c)?]);
    }

    // unfolding: labels "x" for single nodes and "x.1", "x.2" for doubled ones
    let mut labels = Vec::new();
    let mut folds_to = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        if n.copies == 1 {
            labels.push(n.name.clone());
            folds_to.push(i);
        } else {
            for c in 1..=n.copies {
                labels.push(format!("{}.{}", n.name, c));
                folds_to.push(i);
            }
        }
    }
    let mut um = Matrix::zeros(labels.len());
    match &rb.unfolding {
        None => {
            if nodes.iter().any(|n| n.copies != 1) {
                return Err(cfg(k, "doubled nodes need an unfolding"));
            }
            for &(t, h, w) in &edges {
                if w != 1 {
                    return Err(cfg(k, "blocks without unfolding must have weight-1 edges"));
                }
                um.set(t, h, 1);
                um.set(h, t, -1);
            }
        }
        Some(arcs) => {
            for (t, h) in arcs {
                let pos = |s: &str| {
                    labels
                        .iter()
                        .position(|l| l == s)
                        .ok_or_else(|| cfg(k, format!("unknown unfolding node '{}'", s)))
                };
                let (t, h) = (pos(t)?, pos(h)?);
                um.set(t, h, um.get(t, h) + 1);
                um.set(h, t, um.get(h, t) - 1);
            }
        }
    }
    let unfolding = BlockUnfolding {
        labels,
        folds_to,
        matrix: um,
    };
    let mut t = BlockTemplate {
        kind,
        nodes,
        edges,
        faces,
        orbifold_points: rb.orbifold_points,
        provisional: rb.provisional,
        unfolding,
        automorphisms: Vec::new(),
    };
    check_unfolding(&t).map_err(|e| cfg(k, e))?;
    t.automorphisms = automorphisms(&t);
    Ok(t)
}

/// Column sums and sign pattern of the unfolding against the folded block matrix.
fn check_unfolding(t: &BlockTemplate) -> Result<()> {
    let b = t.matrix();
    let u = &t.unfolding;
    let m = u.labels.len();
    for i in 0..t.size() {
        for j in 0..t.size() {
            for col in (0..m).filter(|&c| u.folds_to[c] == j) {
                let mut sum = 0;
                for row in (0..m).filter(|&r| u.folds_to[r] == i) {
                    let e = u.matrix.get(row, col);
                    if b.get(i, j) >= 0 && e < 0 {
                        return Err(Error::Unfolding(format!(
                            "negative entry in nonnegative block ({},{})",
                            t.nodes[i].name, t.nodes[j].name
                        )));
                    }
                    sum += e;
                }
                if sum != b.get(i, j) {
                    return Err(Error::Unfolding(format!(
                        "column sum {} differs from b = {} in block ({},{})",
                        sum,
                        b.get(i, j),
                        t.nodes[i].name,
                        t.nodes[j].name
                    )));
                }
            }
        }
    }
    Ok(())
}

fn automorphisms(t: &BlockTemplate) -> Vec<Vec<usize>> {
    let n = t.size();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        t: &BlockTemplate,
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = t.size();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for j in 0..n {
            if used[j]
                || t.nodes[i].color != t.nodes[j].color
                || t.nodes[i].copies != t.nodes[j].copies
            {
                continue;
            }
            if (0..i).any(|a| t.signed(a, i) != t.signed(perm[a], j)) {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            rec(t, i + 1, perm, used, out);
            used[j] = false;
        }
    }
    rec(t, 0, &mut perm, &mut used, &mut out);
    out.sort();
    out
}

/// The built-in catalog.
pub fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::parse(CATALOG_SOURCE).expect("built-in block catalog is valid"))
}

pub fn template(kind: BlockKind) -> &'static BlockTemplate {
    catalog().get(kind)
}

/// Unfolding of a block, or `None` for elementary blocks, whose unfolding is the block itself.
pub fn unfold_block(kind: BlockKind) -> Option<&'static BlockUnfolding> {
    if kind.is_new() {
        Some(&template(kind).unfolding)
    } else {
        None
    }
}
