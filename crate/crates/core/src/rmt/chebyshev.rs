/// Chebyshev polynomial of the first kind `T_order(t)` by the three-term
/// recurrence `T_{k+1} = 2t T_k − T_{k−1}`.
pub fn chebyshev_eval(order: usize, t: f64) -> f64 {
    match order {
        0 => 1.0,
        1 => t,
        _ => {
            let (mut prev, mut cur) = (1.0, t);
            for _ in 1..order {
                let next = 2.0 * t * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}
