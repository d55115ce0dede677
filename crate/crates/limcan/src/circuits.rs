//! Elementary circuits of small directed multigraphs by backtracking.
//!
//! A circuit is a closed head-to-tail sequence of arcs with pairwise distinct tails that never
//! uses an arc together with its reverse. Each circuit is produced once, rotated so that it
//! starts at its smallest vertex.

use crate::error::{Error, Result};

/// Default cap on the number of circuits enumerated.
pub const DEFAULT_CAP: usize = 1_000_000;

/// A directed multigraph given by its arcs; `partner[a]` is the reverse arc, if any.
#[derive(Clone, Debug)]
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
    pub partner: Vec<Option<usize>>,
}

impl Digraph {
    /// All elementary circuits, as arc sequences. Fails with [`Error::Cap`] beyond `cap`.
    pub fn circuits(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let mut out_arcs = vec![Vec::new(); self.n];
        for (a, &(t, _)) in self.arcs.iter().enumerate() {
            out_arcs[t].push(a);
        }
        let mut found = Vec::new();
        let mut path = Vec::new();
        let mut on_path = vec![false; self.n];
        for start in 0..self.n {
            on_path[start] = true;
            self.extend(start, start, &out_arcs, &mut path, &mut on_path, &mut found, cap)?;
            on_path[start] = false;
        }
        Ok(found)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        start: usize,
        at: usize,
        out_arcs: &[Vec<usize>],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        found: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        for &a in &out_arcs[at] {
            let h = self.arcs[a].1;
            if h < start {
                continue;
            }
            if let Some(p) = self.partner[a] {
                if path.last() == Some(&p) || (h == start && path.first() == Some(&p)) {
                    continue;
                }
            }
            if h == start {
                path.push(a);
                found.push(path.clone());
                path.pop();
                if found.len() > cap {
                    return Err(Error::Cap(format!("more than {cap} circuits")));
                }
            } else if !on_path[h] {
                on_path[h] = true;
                path.push(a);
                self.extend(start, h, out_arcs, path, on_path, found, cap)?;
                path.pop();
                on_path[h] = false;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(n: usize, edges: &[(usize, usize)]) -> Digraph {
        let mut arcs = Vec::new();
        let mut partner = Vec::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            arcs.push((u, v));
            arcs.push((v, u));
            partner.push(Some(2 * i + 1));
            partner.push(Some(2 * i));
        }
        Digraph { n, arcs, partner }
    }

    #[test]
    fn counts() {
        // Triangle: two orientations.
        assert_eq!(undirected(3, &[(0, 1), (1, 2), (2, 0)]).circuits(100).unwrap().len(), 2);
        // Theta graph: three pairs of parallel edges, each in two orientations.
        assert_eq!(undirected(2, &[(0, 1), (0, 1), (0, 1)]).circuits(100).unwrap().len(), 6);
        // A loop gives two one-arc circuits.
        assert_eq!(undirected(1, &[(0, 0)]).circuits(100).unwrap().len(), 2);
        // K4: 7 cycles, two orientations each.
        let k4 = undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(k4.circuits(100).unwrap().len(), 14);
        assert!(matches!(k4.circuits(5), Err(Error::Cap(_))));
    }
}
