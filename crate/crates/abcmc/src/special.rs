//! Scalar special functions: log-gamma, the error function pair, and the
//! standard normal CDF and quantile.
//!
//! These are rational or series approximations accurate to near machine
//! precision, so marginal likelihoods and prior masses built on them are
//! trustworthy to far tighter tolerances than any Monte Carlo error in the
//! rest of the crate.

/// Lanczos approximation, g = 7, nine terms. Defined for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    const LG: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(x > 0.0 && x.is_finite(), "ln_gamma domain: x > 0, got {x}");
    if x < 0.5 {
        // reflection keeps the series argument away from zero
        let s = (std::f64::consts::PI * x).sin();
        return (std::f64::consts::PI / s).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LG[0];
    for (i, c) in LG.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Log binomial coefficient ln C(n, k).
pub fn ln_choose(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_choose domain: k <= n");
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

// Rational approximations for erf/erfc over three ranges (Cody 1969).
const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_56e2,
    3.774_852_376_853_020_2e2,
    3.209_377_589_138_469_47e3,
    1.857_777_061_846_031_53e-1,
];
const ERF_B: [f64; 4] = [
    2.360_129_095_234_412_09e1,
    2.440_246_379_344_441_73e2,
    1.282_616_526_077_372_28e3,
    2.844_236_833_439_170_62e3,
];
const ERF_C: [f64; 9] = [
    5.641_884_969_886_700_89e-1,
    8.883_149_794_388_375_94e0,
    6.611_919_063_714_162_95e1,
    2.986_351_381_974_001_31e2,
    8.819_522_212_417_690_9e2,
    1.712_047_612_634_070_58e3,
    2.051_078_377_826_071_47e3,
    1.230_339_354_797_997_25e3,
    2.153_115_354_744_038_46e-8,
];
const ERF_D: [f64; 8] = [
    1.574_492_611_070_983_47e1,
    1.176_939_508_913_124_99e2,
    5.371_811_018_620_098_58e2,
    1.621_389_574_566_690_19e3,
    3.290_799_235_733_459_63e3,
    4.362_619_090_143_247_16e3,
    3.439_367_674_143_721_64e3,
    1.230_339_354_803_749_42e3,
];
/// erfc on 0.46875 < y, split so the exponential keeps full precision.
/// Beyond the rational's range the Laplace continued fraction
/// 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...)))) converges in a few dozen
/// terms to machine precision.
fn erfc_tail(y: f64) -> f64 {
    let r = if y <= 4.0 {
        let mut num = ERF_C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + ERF_C[i]) * y;
            den = (den + ERF_D[i]) * y;
        }
        (num + ERF_C[7]) / (den + ERF_D[7])
    } else {
        let mut t = 0.0;
        for k in (1..=40).rev() {
            t = (0.5 * k as f64) / (y + t);
        }
        1.0 / ((y + t) * std::f64::consts::PI.sqrt())
    };
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= 0.46875 {
        let z = y * y;
        let mut num = ERF_A[4] * z;
        let mut den = z;
        for i in 0..3 {
            num = (num + ERF_A[i]) * z;
            den = (den + ERF_B[i]) * z;
        }
        x * (num + ERF_A[3]) / (den + ERF_B[3])
    } else if x > 0.0 {
        1.0 - erfc_tail(y)
    } else {
        erfc_tail(y) - 1.0
    }
}

pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= 0.46875 {
        1.0 - erf(x)
    } else if x > 0.0 {
        erfc_tail(y)
    } else {
        2.0 - erfc_tail(y)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal quantile, rational approximation with absolute error
/// well under 1e-9 across (0, 1) (Wichura's PPND16). Returns infinities at
/// the endpoints and NaN outside [0, 1].
pub fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 8] = [
        3.387_132_872_796_366_608,
        133.141_667_891_784_377_45,
        1_971.590_950_306_551_442_7,
        13_731.693_765_509_461_125,
        45_921.953_931_549_871_457,
        67_265.770_927_008_700_853,
        33_430.575_583_588_128_105,
        2_509.080_928_730_122_672_7,
    ];
    const B: [f64; 7] = [
        42.313_330_701_600_911_252,
        687.187_007_492_057_908_3,
        5_394.196_021_424_751_107_7,
        21_213.794_301_586_595_867,
        39_307.895_800_092_710_61,
        28_729.085_735_721_942_674,
        5_226.495_278_852_854_561,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34,
        4.630_337_846_156_545_295_9,
        5.769_497_221_460_691_405_5,
        3.647_848_324_763_204_605_04,
        1.270_458_252_452_368_382_58,
        0.241_780_725_177_450_611_77,
        0.022_723_844_989_269_184_583_4,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 7] = [
        2.053_191_626_637_758_821_87,
        1.676_384_830_183_803_849_4,
        0.689_767_334_985_100_004_55,
        0.148_103_976_427_480_074_59,
        0.015_198_666_563_616_457_196_6,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2,
        5.463_784_911_164_114_369_9,
        1.784_826_539_917_291_335_8,
        0.296_560_571_828_504_891_23,
        0.026_532_189_526_576_123_093,
        0.001_242_660_947_388_078_438_6,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 7] = [
        0.599_832_206_555_887_937_69,
        0.136_929_880_922_735_805_31,
        0.014_875_361_290_850_614_852_5,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];
    fn ratio(num: &[f64; 8], den: &[f64; 7], r: f64) -> f64 {
        let mut n = num[7];
        for c in num[..7].iter().rev() {
            n = n * r + c;
        }
        let mut d = den[6];
        for c in den[..6].iter().rev() {
            d = d * r + c;
        }
        n / (d * r + 1.0)
    }

    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * ratio(&A, &B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    if tail == 0.0 {
        return if q < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let r = (-tail.ln()).sqrt();
    let x = if r <= 5.0 {
        ratio(&C, &D, r - 1.6)
    } else {
        ratio(&E, &F, r - 5.0)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: f64, want: f64, tol: f64) {
        let scale = want.abs().max(1.0);
        assert!(
            (got - want).abs() <= tol * scale,
            "got {got:.17e}, want {want:.17e}"
        );
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert_close(ln_gamma(0.5), 0.572_364_942_924_700_087_07, 1e-13);
        assert_close(ln_gamma(1.0), 0.0, 1e-13);
        assert_close(ln_gamma(3.7), 1.428_072_326_665_387_921_9, 1e-13);
        assert_close(ln_gamma(5.0), 24.0_f64.ln(), 1e-13);
        assert_close(ln_gamma(12.34), 18.337_787_022_900_233_0, 1e-13);
        assert_close(ln_gamma(100.0), 359.134_205_369_575_398_78, 1e-13);
        assert_close(ln_gamma(0.001), 6.907_178_885_383_853_682_5, 1e-13);
    }

    #[test]
    fn ln_choose_small_cases() {
        assert_close(ln_choose(10, 3), 120.0_f64.ln(), 1e-12);
        assert_close(ln_choose(5, 0), 0.0, 1e-12);
        assert_close(ln_choose(52, 26), 495_918_532_948_104.0_f64.ln(), 1e-11);
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert_close(normal_cdf(0.0), 0.5, 1e-15);
        assert_close(normal_cdf(1.96), 0.975_002_104_851_779_565_9, 1e-14);
        assert_close(normal_cdf(0.3), 0.617_911_422_188_952_637_3, 1e-14);
        assert_close(normal_cdf(2.3), 0.989_275_889_978_324_194_6, 1e-14);
        // far tails, checked as relative error
        let t = normal_cdf(-5.0);
        assert!((t / 2.866_515_718_791_939_12e-7 - 1.0).abs() < 1e-12, "{t}");
        let t = normal_cdf(-8.5);
        assert!((t / 9.479_534_822_203_318_35e-18 - 1.0).abs() < 1e-12, "{t}");
        assert_close(normal_cdf(40.0), 1.0, 1e-15);
    }

    #[test]
    fn normal_quantile_reference_values() {
        assert_close(normal_quantile(0.5), 0.0, 1e-15);
        assert_close(normal_quantile(0.975), 1.959_963_984_540_054_235_5, 1e-12);
        assert_close(normal_quantile(0.025), -1.959_963_984_540_054_235_5, 1e-12);
        assert_close(normal_quantile(0.3), -0.524_400_512_708_040_784, 1e-12);
        assert_close(normal_quantile(0.63), 0.331_853_346_436_816_578_2, 1e-12);
        assert_close(normal_quantile(1e-9), -5.997_807_015_007_686_871_6, 1e-12);
        assert_close(normal_quantile(0.0001), -3.719_016_485_455_680_564_4, 1e-12);
        // upper-tail points lose digits to 1 - p representation, not to the
        // approximation itself, hence the looser tolerance
        assert_close(normal_quantile(0.999999), 4.753_424_308_822_898_948_2, 1e-9);
        assert!(normal_quantile(0.0) == f64::NEG_INFINITY);
        assert!(normal_quantile(1.0) == f64::INFINITY);
        assert!(normal_quantile(-0.1).is_nan());
    }

    #[test]
    fn quantile_inverts_cdf() {
        // Two independent approximations agreeing across the range. The
        // upper end stops at 5 because p = 1 - tiny cannot hold the tail to
        // this precision, which is a property of f64, not of either routine.
        let mut x = -8.0;
        while x <= 5.0 {
            let p = normal_cdf(x);
            let back = normal_quantile(p);
            assert!(
                (back - x).abs() < 1e-9,
                "roundtrip at {x}: {back}"
            );
            x += 0.0625;
        }
    }

    #[test]
    fn erf_symmetry_and_complement() {
        for &x in &[0.1, 0.3, 0.46875, 0.5, 1.0, 2.5, 3.9, 4.0, 4.1, 6.0] {
            assert_close(erf(-x), -erf(x), 1e-15);
            assert_close(erf(x) + erfc(x), 1.0, 1e-14);
            assert_close(erfc(-x), 2.0 - erfc(x), 1e-14);
        }
    }
}
