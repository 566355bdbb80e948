//! Small combinatorial helpers shared by enumeration and tests.

/// Binomial coefficient as u128; saturates are not needed at our sizes.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn pow3(k: usize) -> u128 {
    3u128.pow(k as u32)
}

/// Calls `f` for every k-subset of 0..n in lexicographic order.
pub fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Combinations of (k-1)-subsets drawn from `rest` appended after a fixed
/// first element; used to block-partition enumeration for parallel workers.
pub fn for_each_combination_with_prefix<F: FnMut(&[usize])>(
    prefix: &[usize],
    rest_from: usize,
    n: usize,
    k_remaining: usize,
    f: &mut F,
) {
    if k_remaining == 0 {
        f(prefix);
        return;
    }
    let mut buf: Vec<usize> = prefix.to_vec();
    let base = buf.len();
    buf.resize(base + k_remaining, 0);
    let m = n - rest_from;
    if k_remaining > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k_remaining).map(|i| rest_from + i).collect();
    loop {
        buf[base..].copy_from_slice(&idx);
        f(&buf);
        let mut i = k_remaining;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k_remaining {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k_remaining {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
