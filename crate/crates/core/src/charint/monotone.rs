//! Longest monotone subsequence by patience sorting.

/// Length of the longest nondecreasing or nonincreasing subsequence.
pub fn monotone_subsequence(xs: &[f64]) -> usize {
    let up = longest_nondecreasing(xs.iter().copied());
    let down = longest_nondecreasing(xs.iter().map(|x| -x));
    up.max(down)
}

fn longest_nondecreasing(xs: impl Iterator<Item = f64>) -> usize {
    // tails[l] = smallest tail of a nondecreasing run of length l + 1
    let mut tails: Vec<f64> = Vec::new();
    for x in xs {
        let pos = tails.partition_point(|&t| t <= x);
        if pos == tails.len() {
            tails.push(x);
        } else {
            tails[pos] = x;
        }
    }
    tails.len()
}
