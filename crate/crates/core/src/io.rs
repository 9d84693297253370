//! Plain-text graph and partition files.
//!
//! * Edge list: one `u v` pair of 0-based ids per line, each undirected edge
//!   once; `#` starts a comment line.
//! * Partition: `node<TAB>community`, 0-based node, 1-based community.
//! * LFR pair: `network.dat` with 1-based `u v` pairs listed in both
//!   directions, `community.dat` with 1-based `node community` pairs.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| match line {
            Ok(l) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

fn parse_pair(path: &Path, line_no: usize, line: &str) -> Result<(usize, usize)> {
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        line: line_no,
        message,
    };
    let mut fields = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = fields
            .next()
            .ok_or_else(|| parse_err(format!("missing {what}")))?;
        tok.parse::<usize>()
            .map_err(|e| parse_err(format!("bad {what} {tok:?}: {e}")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = fields.next() {
        return Err(parse_err(format!("unexpected trailing field {extra:?}")));
    }
    Ok((a, b))
}

fn one_based(path: &Path, line_no: usize, id: usize) -> Result<usize> {
    id.checked_sub(1).ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        line: line_no,
        message: "ids are 1-based; found 0".to_string(),
    })
}

/// Parses an edge list. With `n = None` the node count is `max id + 1`.
pub fn parse_edge_list<R: BufRead>(reader: R, source: &Path, n: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    for (line_no, line) in data_lines(reader) {
        edges.push(parse_pair(source, line_no, &line?)?);
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edge_list(&edges, n)
}

pub fn read_edge_list(path: impl AsRef<Path>, n: Option<usize>) -> Result<Graph> {
    let path = path.as_ref();
    parse_edge_list(BufReader::new(File::open(path)?), path, n)
}

pub fn write_edge_list(path: impl AsRef<Path>, graph: &Graph) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (u, v) in graph.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a partition file; `n = None` takes the node count from the largest id.
pub fn parse_partition<R: BufRead>(
    reader: R,
    source: &Path,
    n: Option<usize>,
) -> Result<Partition> {
    let mut pairs = Vec::new();
    for (line_no, line) in data_lines(reader) {
        let (node, community) = parse_pair(source, line_no, &line?)?;
        if community == 0 {
            return Err(Error::Parse {
                path: source.to_path_buf(),
                line: line_no,
                message: "community labels are 1-based".to_string(),
            });
        }
        pairs.push((line_no, node, community));
    }
    labels_to_partition(source, pairs, n)
}

fn labels_to_partition(
    source: &Path,
    pairs: Vec<(usize, usize, usize)>,
    n: Option<usize>,
) -> Result<Partition> {
    let n = n.unwrap_or_else(|| pairs.iter().map(|p| p.1 + 1).max().unwrap_or(0));
    let mut labels = vec![0usize; n];
    for (line_no, node, community) in pairs {
        if node >= n {
            return Err(Error::Index { node, n });
        }
        if labels[node] != 0 && labels[node] != community {
            return Err(Error::Parse {
                path: source.to_path_buf(),
                line: line_no,
                message: format!("node {node} assigned to two communities"),
            });
        }
        labels[node] = community;
    }
    if let Some(node) = labels.iter().position(|&l| l == 0) {
        return Err(Error::IncompleteLabeling { node });
    }
    match Partition::new(labels.clone()) {
        Ok(p) => Ok(p),
        Err(Error::EmptyCommunity { .. }) => Ok(Partition::from_raw_labels(&labels)),
        Err(e) => Err(e),
    }
}

pub fn load_partition_file(path: impl AsRef<Path>, n: Option<usize>) -> Result<Partition> {
    let path = path.as_ref();
    parse_partition(BufReader::new(File::open(path)?), path, n)
}

pub fn save_partition_file(path: impl AsRef<Path>, partition: &Partition) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (node, label) in partition.labels().iter().enumerate() {
        writeln!(w, "{node}\t{label}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the `network.dat` / `community.dat` pair written by the LFR benchmark tool.
pub fn load_lfr_pair(
    network: impl AsRef<Path>,
    community: impl AsRef<Path>,
) -> Result<(Graph, Partition)> {
    let (network, community) = (network.as_ref(), community.as_ref());
    parse_lfr_pair(
        BufReader::new(File::open(network)?),
        network,
        BufReader::new(File::open(community)?),
        community,
    )
}

pub fn parse_lfr_pair<R1: BufRead, R2: BufRead>(
    network: R1,
    network_path: &Path,
    community: R2,
    community_path: &Path,
) -> Result<(Graph, Partition)> {
    let mut pairs = Vec::new();
    for (line_no, line) in data_lines(community) {
        let (node, label) = parse_pair(community_path, line_no, &line?)?;
        let node = one_based(community_path, line_no, node)?;
        if label == 0 {
            return Err(Error::Parse {
                path: community_path.to_path_buf(),
                line: line_no,
                message: "community labels are 1-based".to_string(),
            });
        }
        pairs.push((line_no, node, label));
    }

    let mut edges = Vec::new();
    for (line_no, line) in data_lines(network) {
        let (u, v) = parse_pair(network_path, line_no, &line?)?;
        let (u, v) = (
            one_based(network_path, line_no, u)?,
            one_based(network_path, line_no, v)?,
        );
        if u == v {
            return Err(Error::SelfLoop { node: u });
        }
        edges.push((u.min(v), u.max(v)));
    }
    edges.sort_unstable();
    edges.dedup();

    let n = pairs
        .iter()
        .map(|p| p.1 + 1)
        .chain(edges.iter().map(|&(_, v)| v + 1))
        .max()
        .unwrap_or(0);
    let partition = labels_to_partition(community_path, pairs, Some(n))?;
    let graph = Graph::from_edge_list(&edges, n)?;
    Ok((graph, partition))
}

/// `<prefix>.edges` / `<prefix>.part` paths used by the `generate` command.
pub fn output_pair(prefix: &Path) -> (PathBuf, PathBuf) {
    let mut edges = prefix.as_os_str().to_owned();
    edges.push(".edges");
    let mut part = prefix.as_os_str().to_owned();
    part.push(".part");
    (edges.into(), part.into())
}
