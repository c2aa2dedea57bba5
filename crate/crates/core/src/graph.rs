//! Small graph utilities over dense `usize` vertices.

/// Strongly connected components by Tarjan's algorithm (iterative).
/// Returns the component of every vertex and, per component, whether it
/// contains a cycle (more than one vertex, or a self-loop).
pub(crate) fn sccs(adj: &[Vec<usize>]) -> (Vec<usize>, Vec<bool>) {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut cyclic = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = work.last() {
            if pos < adj[v].len() {
                let w = adj[v][pos];
                work.last_mut().unwrap().1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = cyclic.len();
                    let mut size = 0;
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = id;
                        size += 1;
                        if w == v {
                            break;
                        }
                    }
                    cyclic.push(size > 1 || adj[v].contains(&v));
                }
            }
        }
    }
    (comp, cyclic)
}

/// Some cycle in the graph, as a closed vertex sequence, found by a
/// depth-first search visiting vertices and edges in index order.
pub(crate) fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let n = adj.len();
    let mut color = vec![WHITE; n];
    for root in 0..n {
        if color[root] != WHITE {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        color[root] = GREY;
        while let Some(&(v, pos)) = work.last() {
            if pos < adj[v].len() {
                work.last_mut().unwrap().1 += 1;
                let w = adj[v][pos];
                match color[w] {
                    WHITE => {
                        color[w] = GREY;
                        work.push((w, 0));
                    }
                    GREY => {
                        let start = work.iter().position(|&(x, _)| x == w).unwrap();
                        let mut cycle: Vec<usize> = work[start..].iter().map(|&(x, _)| x).collect();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                color[v] = BLACK;
                work.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components() {
        let adj = vec![vec![1], vec![0, 2], vec![], vec![3]];
        let (comp, cyclic) = sccs(&adj);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[1], comp[2]);
        assert!(cyclic[comp[0]]);
        assert!(!cyclic[comp[2]]);
        assert!(cyclic[comp[3]]);
    }

    #[test]
    fn cycles() {
        assert_eq!(find_cycle(&[vec![1], vec![2], vec![1]]), Some(vec![1, 2, 1]));
        assert_eq!(find_cycle(&[vec![1], vec![]]), None);
        assert_eq!(find_cycle(&[vec![0]]), Some(vec![0, 0]));
    }
}
