//! Butcher tableaus for the two embedded explicit pairs.
//!
//! Verner's "most efficient" 6(5) pair carries a 5th-order continuous
//! extension bought with one extra stage per accepted step (coefficients
//! from Jim Verner's published RKV65.IIIXb tables). Dormand-Prince 5(4) is
//! the classic pair with the 4th-order interpolant from Hairer, Nørsett &
//! Wanner. Both are FSAL: the last stage is the derivative at the accepted
//! point and seeds the next step.

// ---------------------------------------------------------------- Verner 6(5)

pub(crate) const V65_STAGES: usize = 9;
pub(crate) const V65_DENSE_STAGES: usize = 10;

pub(crate) const V65_C: [f64; V65_STAGES] = [
    0.0,
    0.06,
    0.09593333333333333,
    0.1439,
    0.4973,
    0.9725,
    0.9995,
    1.0,
    1.0,
];

#[rustfmt::skip]
pub(crate) const V65_A: [[f64; V65_STAGES]; V65_STAGES] = [
    [0.0; 9],
    [0.06, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.019239962962962962, 0.07669337037037037, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.035975, 0.0, 0.107925, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.3186834152331484, 0.0, -5.042058063628562, 4.220674648395414, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-41.872591664327516, 0.0, 159.4325621631375, -122.11921356501003, 5.531743066200054, 0.0, 0.0, 0.0, 0.0],
    [-54.430156935316504, 0.0, 207.06725136501848, -158.61081378459, 6.991816585950242, -0.018597231062203234, 0.0, 0.0, 0.0],
    [-54.66374178728198, 0.0, 207.95280625538936, -159.2889574744995, 7.018743740796944, -0.018338785905045722, -0.0005119484997882099, 0.0, 0.0],
    [0.03438957868357036, 0.0, 0.0, 0.2582624555633503, 0.4209371189673537, 4.40539646966931, -176.48311902429865, 172.36413340141507, 0.0],
];

/// 6th-order weights (equal to the last `A` row: FSAL).
pub(crate) const V65_B: [f64; V65_STAGES] = [
    0.03438957868357036,
    0.0,
    0.0,
    0.2582624555633503,
    0.4209371189673537,
    4.40539646966931,
    -176.48311902429865,
    172.36413340141507,
    0.0,
];

/// Embedded 5th-order weights.
pub(crate) const V65_B_LOW: [f64; V65_STAGES] = [
    0.0490996764838249,
    0.0,
    0.0,
    0.22511122295165242,
    0.4694682253029562,
    0.8065792249988868,
    0.0,
    -0.607119489177796,
    0.056861139440475696,
];

/// Extra interpolation stage: abscissa and its stage coefficients.
pub(crate) const V65_C_DENSE: f64 = 0.5;

#[rustfmt::skip]
pub(crate) const V65_A_DENSE: [f64; V65_DENSE_STAGES] = [
    0.016524159013572806, 0.0, 0.0, 0.3053128187514179, 0.2071200938201979,
    -1.293879140655123, 57.11988411588149, -55.87979207510932,
    0.024830028297766014, 0.0,
];

/// Interpolation polynomial: weight of stage `i` is
/// `s · (P[i][0] + P[i][1]·s + … + P[i][5]·s⁵)`.
#[rustfmt::skip]
pub(crate) const V65_B_DENSE: [[f64; 6]; V65_DENSE_STAGES] = [
    [1.0, -5.308169607103577, 10.18168044895868, -7.520036991611715, 0.9340485368631161, 0.746867191577065],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 6.272050253212501, -16.02618147467746, 12.844356324519618, -1.1487945044767591, -1.6831681430145498],
    [0.0, 6.876491702846304, -24.635767260846333, 33.21078648379717, -17.49461528263644, 2.4640414758066496],
    [0.0, -35.5444517105996, 165.7016170190242, -385.4635395491143, 442.43241370157017, -182.7206429912112],
    [0.0, 1918.6548566980114, -9268.121508966042, 20858.33702877255, -22645.82767158481, 8960.474176055992],
    [0.0, -1883.0698021327182, 9101.025187200634, -20473.188551959534, 22209.765551256532, -8782.1682509635],
    [0.0, 0.11902479635123643, -0.12502696705039376, 1.7799569193949991, -4.660932123043763, 2.886977374347921],
    [0.0, -8.0, 32.0, -40.0, 16.0, 0.0],
];

// --------------------------------------------------------- Dormand-Prince 5(4)

pub(crate) const DP54_STAGES: usize = 7;

pub(crate) const DP54_C: [f64; DP54_STAGES] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

#[rustfmt::skip]
pub(crate) const DP54_A: [[f64; DP54_STAGES]; DP54_STAGES] = [
    [0.0; 7],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0],
];

/// 5th-order weights (equal to the last `A` row: FSAL).
pub(crate) const DP54_B: [f64; DP54_STAGES] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Embedded 4th-order weights.
pub(crate) const DP54_B_LOW: [f64; DP54_STAGES] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Stage weights of the quartic term in the 4th-order interpolant.
pub(crate) const DP54_D: [f64; DP54_STAGES] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_abscissae_match_row_sums() {
        for i in 0..V65_STAGES {
            let sum: f64 = V65_A[i].iter().sum();
            assert!((sum - V65_C[i]).abs() < 1e-12, "V65 row {i}: {sum}");
        }
        for i in 0..DP54_STAGES {
            let sum: f64 = DP54_A[i].iter().sum();
            assert!((sum - DP54_C[i]).abs() < 1e-12, "DP54 row {i}: {sum}");
        }
        let dense_sum: f64 = V65_A_DENSE.iter().sum();
        assert!((dense_sum - V65_C_DENSE).abs() < 1e-12);
    }

    #[test]
    fn weights_sum_to_one() {
        for b in [&V65_B, &V65_B_LOW] {
            let s: f64 = b.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        for b in [&DP54_B, &DP54_B_LOW] {
            let s: f64 = b.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolant_endpoints_match_the_step() {
        // at s=1 the V65 interpolant weights must reproduce the 6th-order b
        // row; rows with 1e4-scale coefficients cancel down to O(1), so
        // allow the matching rounding slack
        for i in 0..V65_DENSE_STAGES {
            let at_one: f64 = V65_B_DENSE[i].iter().sum();
            let expected = if i < V65_STAGES { V65_B[i] } else { 0.0 };
            let scale: f64 = V65_B_DENSE[i].iter().map(|c| c.abs()).sum::<f64>().max(1.0);
            assert!(
                (at_one - expected).abs() < 1e-13 * scale,
                "V65 dense row {i}: {at_one} vs {expected}"
            );
        }
    }
}
