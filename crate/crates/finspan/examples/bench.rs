use finspan::*;
use finspan::classes::MorphismFamily;
use finspan::span2::SpanTwoCtx;
use std::time::Instant;
fn main() {
    // divlat12 and c2sets totals must fit; finset3 must guard out quickly
    let d = catalog::gen_divisor_lattice(12);
    let all = MorphismFamily::all(&d, "all");
    let ctx = SpanTwoCtx::new(&d, &all, &all, &all);
    for o in d.objects() {
        let t0 = Instant::now();
        match extend::total_category_free(&ctx, o, &Guards { max_objects: 64, max_enum: 500_000_000 }) {
            Ok(t) => println!("divlat12 a={}: {:?} base mors={}", d.object_name(o), t0.elapsed(), t.cat.n_morphisms()),
            Err(e) => println!("divlat12 a={}: {:?} err={e}", d.object_name(o), t0.elapsed()),
        }
    }
    let g = catalog::gen_gset_c2();
    let inj = catalog::gset_injections(&g);
    let ctx = SpanTwoCtx::new(&g, &inj, &inj, &inj);
    for o in g.objects() {
        let t0 = Instant::now();
        match extend::total_category_free(&ctx, o, &Guards { max_objects: 64, max_enum: 500_000_000 }) {
            Ok(t) => println!("c2sets a={}: {:?} base mors={}", g.object_name(o), t0.elapsed(), t.cat.n_morphisms()),
            Err(e) => println!("c2sets a={}: {:?} err={e}", g.object_name(o), t0.elapsed()),
        }
    }
    let c = catalog::gen_finset(3);
    let injf = catalog::finset_injections(&c);
    let ctx = SpanTwoCtx::new(&c, &injf, &injf, &injf);
    for o in c.objects() {
        let t0 = Instant::now();
        match extend::total_category_free(&ctx, o, &Guards { max_objects: 64, max_enum: 500_000_000 }) {
            Ok(t) => println!("finset3 a={}: {:?} base mors={}", c.object_name(o), t0.elapsed(), t.cat.n_morphisms()),
            Err(e) => println!("finset3 a={}: {:?} err={e}", c.object_name(o), t0.elapsed()),
        }
    }
}
