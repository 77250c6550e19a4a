use ordkern::order::*;
use ordkern::term::render_term;
use std::cmp::Ordering;
use std::time::Instant;

fn main() {
    let terms = enumerate_normal_terms(7);
    println!("{} normal terms size<=7", terms.len());
    let t0 = Instant::now();
    // irreflexivity + antisymmetry over all pairs
    let mut bad = 0;
    for s in &terms {
        if cmp_raw(s, s) != Ordering::Equal {
            bad += 1;
        }
    }
    let n = terms.len();
    for i in 0..n {
        for j in 0..n {
            let c1 = cmp_raw(&terms[i], &terms[j]);
            let c2 = cmp_raw(&terms[j], &terms[i]);
            if c1 != c2.reverse() {
                bad += 1;
                if bad < 5 {
                    println!("ANTISYM {} vs {}: {:?}/{:?}", render_term(&terms[i]), render_term(&terms[j]), c1, c2);
                }
            }
            if c1 == Ordering::Equal && terms[i] != terms[j] {
                bad += 1;
                if bad < 8 {
                    println!("EQ-DISTINCT {} vs {}", render_term(&terms[i]), render_term(&terms[j]));
                }
            }
        }
    }
    println!("pairs done, bad={bad}, {:?}", t0.elapsed());
    // transitivity on a deterministic sample of triples
    let t0 = Instant::now();
    let mut seed = 0x243F6A8885A308D3u64;
    let mut rng = move || { seed ^= seed << 13; seed ^= seed >> 7; seed ^= seed << 17; seed };
    let mut badt = 0;
    for _ in 0..200_000 {
        let a = &terms[(rng() % n as u64) as usize];
        let b = &terms[(rng() % n as u64) as usize];
        let c = &terms[(rng() % n as u64) as usize];
        if cmp_raw(a, b) == Ordering::Less && cmp_raw(b, c) == Ordering::Less && cmp_raw(a, c) != Ordering::Less {
            badt += 1;
            if badt < 5 {
                println!("TRANS {} < {} < {} but not a<c", render_term(a), render_term(b), render_term(c));
            }
        }
    }
    println!("transitivity sample done, bad={badt}, {:?}", t0.elapsed());
}
