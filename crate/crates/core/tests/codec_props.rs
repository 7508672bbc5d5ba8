use norcode::channel::LevelGrid;
use norcode::codec::{
    enumerate_codewords, margin_sense, oracle_nearest, parity_ok, read_byte, soft_correct, CodeBook, ReadVector,
};
use proptest::prelude::*;

/// Voltages on a 1/1024 lattice so that integer offsets translate exactly.
fn lattice_read(span: f64) -> impl Strategy<Value = [f64; 4]> {
    let max = (span * 1024.0) as i64;
    prop::array::uniform4(-1024i64..max + 1024).prop_map(|a| a.map(|k| k as f64 / 1024.0))
}

fn unit_grid(l0: f64) -> LevelGrid {
    LevelGrid::new(5, l0, 0.75, 0.25).unwrap()
}

#[test]
fn enumeration_count_closed_form() {
    for n in [3usize, 5, 7] {
        let words = enumerate_codewords(n);
        assert_eq!(words.len(), n.pow(4).div_ceil(2), "n = {n}");
        assert!(words.iter().all(|w| parity_ok(&w.symbols())));
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }
}

#[test]
fn zero_noise_roundtrip_all_bytes() {
    let book = CodeBook::five_level();
    for l0 in [0.0, -3.5, 12.0] {
        let grid = unit_grid(l0);
        for b in 0..=255u8 {
            let word = book.encode(b).unwrap();
            let out = read_byte(&ReadVector::at_levels(word.symbols(), &grid).unwrap(), &grid, &book).unwrap();
            assert!(out.parity_passed);
            assert_eq!(out.byte, Some(b));
        }
    }
}

#[test]
fn opposite_unit_shifts_go_undetected() {
    let book = CodeBook::five_level();
    let grid = unit_grid(0.0);
    let written = book.encode(book.byte_of(&[1, 1, 0, 0]).unwrap()).unwrap();
    let out = read_byte(&ReadVector::at_levels([2, 0, 0, 0], &grid).unwrap(), &grid, &book).unwrap();
    assert!(out.parity_passed);
    assert_eq!(out.decoded(), [2, 0, 0, 0]);
    assert_ne!(out.decoded(), written.symbols());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn translation_invariance(v in lattice_read(4.0), offset in -64i32..64) {
        let book = CodeBook::five_level();
        let base = unit_grid(0.0);
        let shifted = unit_grid(offset as f64);
        let read = ReadVector::new(v).unwrap();
        let moved = ReadVector::new(v.map(|x| x + offset as f64)).unwrap();
        let a = read_byte(&read, &base, &book).unwrap();
        let b = read_byte(&moved, &shifted, &book).unwrap();
        prop_assert_eq!(a.sensed, b.sensed);
        prop_assert_eq!(a.parity_passed, b.parity_passed);
        prop_assert_eq!(a.corrected, b.corrected);
        prop_assert_eq!(a.byte, b.byte);
        match (a.decoder_distance, b.decoder_distance) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9),
            (x, y) => prop_assert_eq!(x, y),
        }
    }

    #[test]
    fn decoder_outputs_are_codewords(v in prop::array::uniform4(-2.0f64..6.0)) {
        let book = CodeBook::five_level();
        let grid = unit_grid(0.0);
        let read = ReadVector::new(v).unwrap();
        let out = read_byte(&read, &grid, &book).unwrap();
        prop_assert!(parity_ok(&out.decoded()));
        let (oracle, _) = oracle_nearest(&read, &grid, &book).unwrap();
        prop_assert!(parity_ok(&oracle.symbols()));
        if out.parity_passed {
            prop_assert!(out.corrected.is_none());
        }
    }

    #[test]
    fn oracle_dominates_soft_correct(v in prop::array::uniform4(-2.0f64..6.0)) {
        let book = CodeBook::five_level();
        let grid = unit_grid(0.0);
        let read = ReadVector::new(v).unwrap();
        let sensed = margin_sense(&read, &grid);
        if parity_ok(&sensed) {
            prop_assert!(soft_correct(&read, &sensed, &grid, &book).is_err());
            return Ok(());
        }
        let (soft, d_soft) = soft_correct(&read, &sensed, &grid, &book).unwrap();
        let (oracle, d_oracle) = oracle_nearest(&read, &grid, &book).unwrap();
        prop_assert!(parity_ok(&soft.symbols()));
        prop_assert!(d_oracle <= d_soft + 1e-12);
        if d_oracle < d_soft - 1e-12 {
            let gap = oracle.sum() as i64 - sensed.iter().map(|&s| s as i64).sum::<i64>();
            prop_assert!(gap % 2 != 0 && gap.abs() != 1, "gap {}", gap);
        }
    }
}
