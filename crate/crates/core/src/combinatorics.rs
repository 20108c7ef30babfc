//! Small enumeration helpers shared by the checker, axioms and deciders.

/// All subsets of `items`, by increasing size, each in lexicographic order
/// of positions.
pub(crate) fn subsets_by_size<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    let n = items.len();
    let mut out = Vec::new();
    for k in 0..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i].clone()).collect());
            // Advance to the next k-combination.
            match (0..k).rev().find(|&i| idx[i] < n - k + i) {
                None => break,
                Some(i) => {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                }
            }
        }
    }
    out
}

/// Ordered selections of `k` distinct elements (k-permutations).
pub(crate) fn arrangements(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    go(n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_size_order() {
        let s = subsets_by_size(&[0, 1, 2]);
        assert_eq!(
            s,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(subsets_by_size::<u8>(&[]), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(3, 2).len(), 6);
        assert_eq!(arrangements(3, 0), vec![Vec::<usize>::new()]);
        assert!(arrangements(2, 3).is_empty());
    }
}
