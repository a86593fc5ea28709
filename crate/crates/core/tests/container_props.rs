use proptest::prelude::*;

use vibcs::io::{decode_container, encode_container, CompressedContainer, Segment};
use vibcs::measure::{build_matrix, MatrixKind};
use vibcs::transforms::{BasisKind, BasisSpec};

fn container() -> impl Strategy<Value = CompressedContainer> {
    (0usize..4, 2u32..8, 0usize..3, any::<u64>(), 1e-3f64..1e6, 0usize..4)
        .prop_flat_map(|(b, log_n, mk, seed, fs, count)| {
            let n = 1usize << log_n;
            (Just((b, n, mk, seed, fs, count)), 1..=n, 1..=n)
        })
        .prop_flat_map(|((b, n, mk, seed, fs, count), m, last_len)| {
            let values = proptest::collection::vec(proptest::num::f64::ANY, m * count);
            (Just((b, n, mk, seed, fs, count, m, last_len)), values)
        })
        .prop_map(|((b, n, mk, seed, fs, count, m, last_len), values)| {
            let matrix = [MatrixKind::Gaussian, MatrixKind::Bernoulli, MatrixKind::Wang][mk];
            CompressedContainer {
                basis: BasisSpec::new(BasisKind::ALL[b], n).unwrap(),
                matrix: build_matrix(matrix, m, n, seed).unwrap(),
                sample_rate_hz: fs,
                segments: (0..count)
                    .map(|i| Segment {
                        true_length: if i + 1 == count { last_len } else { n },
                        measurements: values[i * m..(i + 1) * m].to_vec(),
                    })
                    .collect(),
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_round_trips_bit_for_bit(c in container()) {
        let bytes = encode_container(&c).unwrap();
        let back = decode_container(&bytes).unwrap();
        prop_assert_eq!(encode_container(&back).unwrap(), bytes);
        prop_assert_eq!(back.basis, c.basis);
        prop_assert_eq!(&back.matrix, &c.matrix);
        for (a, b) in back.segments.iter().zip(&c.segments) {
            prop_assert_eq!(a.true_length, b.true_length);
            let same = a.measurements.iter().zip(&b.measurements).all(|(x, y)| x.to_bits() == y.to_bits());
            prop_assert!(same);
        }
    }

    #[test]
    fn truncation_is_always_rejected(c in container(), cut in 1usize..64) {
        let bytes = encode_container(&c).unwrap();
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(decode_container(&bytes[..keep]).is_err());
    }
}
