use std::path::Path;

use anyhow::{Context, Result};
use discrete_gb::{generate, io, Graph, GraphKind};

/// A graph argument: an existing file (edge list or JSON) or a generator
/// spec such as `er:200:0.1@7`. Without `@seed` the global seed is used.
pub fn load_graph(arg: &str, default_seed: u64) -> Result<(String, Graph)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let graph = io::parse_graph(&text).with_context(|| format!("parsing {arg}"))?;
        return Ok((arg.to_string(), graph));
    }
    let (spec, seed) = match arg.split_once('@') {
        Some((spec, seed)) => (spec, seed.parse::<u64>().with_context(|| format!("bad seed in `{arg}`"))?),
        None => (arg, default_seed),
    };
    let kind: GraphKind = spec
        .parse()
        .with_context(|| format!("`{arg}` is neither a readable file nor a generator spec"))?;
    Ok((arg.to_string(), generate(&kind, seed)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_with_and_without_seed() {
        let (_, a) = load_graph("er:30:0.3@5", 0).unwrap();
        let (_, b) = load_graph("er:30:0.3", 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(load_graph("icosahedron", 0).unwrap().1.size(), 30);
        assert!(load_graph("nonsense", 0).is_err());
        assert!(load_graph("cycle:5@x", 0).is_err());
    }
}
