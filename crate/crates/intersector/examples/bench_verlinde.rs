use intersector::residueengine::verlinde_chi;
use intersector::versuite::verlinde_mapcount;
use std::time::Instant;

fn main() {
    for (r, g, s, expect) in [
        (2u32, 2u32, 1u32, 6i64), (2, 2, 2, 19),
        (2, 3, 1, 28), (2, 3, 2, 265),
        (3, 2, 1, 85), (3, 2, 2, 1710),
        (3, 3, 1, 3661), (3, 3, 2, 1318842),
    ] {
        let t = Instant::now();
        let chi = verlinde_chi(r, 1, g, s).unwrap();
        let t_chi = t.elapsed();
        let t = Instant::now();
        let mc = verlinde_mapcount(r, 1, g, s).unwrap();
        let t_mc = t.elapsed();
        println!(
            "r={r} g={g} s={s}: chi={chi} ({t_chi:?}), mapcount={mc} ({t_mc:?}), expect {expect}, agree={}",
            chi == mc && chi.to_string() == expect.to_string()
        );
    }
}
