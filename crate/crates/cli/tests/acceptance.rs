//! Acceptance run: one line per criterion, exact checks with wall-clock bounds.

use std::time::{Duration, Instant};

use formlab_cli::{run_suite, CheckRecord, ExperimentConfig, Report, Status, Suite};

struct Criterion {
    number: u32,
    title: &'static str,
    bound: Option<Duration>,
    /// pushes one line per problem and returns a summary
    body: fn(&mut Vec<String>) -> String,
}

fn config(suite: Suite, fields: &[&str], dims: (usize, usize), genus: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(suite);
    c.fields = fields.iter().map(|s| s.to_string()).collect();
    c.min_dim = Some(dims.0);
    c.max_dim = Some(dims.1);
    c.max_genus = Some(genus);
    c
}

fn run(cfg: &ExperimentConfig) -> Report {
    run_suite(cfg).unwrap_or_else(|e| panic!("{} rejected its configuration: {e}", cfg.suite.name()))
}

/// Problems common to every criterion: failed checks or an aborted suite.
fn clean(r: &Report, problems: &mut Vec<String>) {
    if let Some(e) = &r.error {
        problems.push(format!("{} aborted: {e}", r.suite));
    }
    for c in r.failures() {
        problems.push(format!("{}: {}", c.name, c.detail()));
    }
}

fn passing<'a>(r: &'a Report, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
    r.checks.iter().filter(move |c| c.status == Status::Pass && c.name.starts_with(prefix))
}

fn require(problems: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        problems.push(what.into());
    }
}

fn require_pass(r: &Report, name: &str, problems: &mut Vec<String>) -> Option<String> {
    match r.check(name) {
        Some(c) if c.status == Status::Pass => Some(c.detail().to_string()),
        Some(c) => {
            problems.push(format!("{name}: status {}", c.status.as_str()));
            None
        }
        None => {
            problems.push(format!("{name}: missing"));
            None
        }
    }
}

fn instances(c: &CheckRecord) -> usize {
    c.detail().split_whitespace().next().and_then(|s| s.parse().ok()).unwrap_or(0)
}

fn building_table(p: &mut Vec<String>) -> String {
    let r = run(&config(Suite::BuildingDims, &["2", "3"], (1, 4), 2));
    clean(&r, p);
    let count = |prefix: &str| passing(&r, prefix).count();
    let gl = count("rank table: P(");
    let bar = count("rank table: Pbar");
    let iso = passing(&r, "rank table: Pi(").filter(|c| !c.name.contains("U dim")).count();
    let rel = passing(&r, "rank table: Pi(").filter(|c| c.name.contains("U dim")).count();
    require(p, gl > 0 && bar > 0 && iso > 0 && rel > 0, "a building flavor is missing");
    format!("{} buildings: {gl} P, {bar} Pbar, {iso} Pi(E), {rel} Pi(E,U)", r.checks.len())
}

fn cohen_macaulay(p: &mut Vec<String>) -> String {
    let r = run(&config(Suite::CohenMacaulay, &["2", "3"], (1, 3), 2));
    clean(&r, p);
    for name in ["Cohen-Macaulay: P(F_2^3)", "Cohen-Macaulay: P(F_3^3)"] {
        require_pass(&r, name, p);
    }
    for preset in ["symplectic", "orthogonal", "unitary"] {
        for q in [2, 3] {
            let tag = match preset {
                "unitary" => format!("{preset} F_{}", q * q),
                _ => format!("{preset} F_{q}"),
            };
            for g in 1..=2 {
                require_pass(&r, &format!("Cohen-Macaulay: Pi(H^{g} {tag})"), p);
            }
            let rel = passing(&r, &format!("Cohen-Macaulay: Pi(H^2 {tag}, U dim")).count();
            require(p, rel > 0, format!("no Pi(E,U) with g(E) = 2 for {tag}"));
        }
    }
    let bars = passing(&r, "Cohen-Macaulay: Pbar(").count();
    format!("{} posets Cohen-Macaulay, {bars} of them Pbar(V,V0)", passing(&r, "Cohen-Macaulay").count())
}

fn filtration(p: &mut Vec<String>) -> String {
    let r = run(&config(Suite::FiltrationComplex, &["2", "3"], (1, 3), 2));
    clean(&r, p);
    let all = passing(&r, "filtration complex = order complex").count();
    let rel = passing(&r, "filtration complex = order complex: Pi(").filter(|c| c.name.contains("U dim")).count();
    require(p, all >= 10, format!("only {all} posets compared"));
    require(p, rel >= 2, format!("only {rel} relative isotropic buildings"));
    format!("{all} posets agree, {rel} relative isotropic")
}

fn steinberg(p: &mut Vec<String>) -> String {
    let r = run(&config(Suite::SteinbergCoinvariants, &["2", "3", "2^2"], (1, 3), 2));
    clean(&r, p);
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        require_pass(&r, &format!("rank St(F_{q}^{n}) = q^(n(n-1)/2)"), p);
    }
    let mut relative = 0;
    for q in [3, 4] {
        for n in 2..=3 {
            require_pass(&r, &format!("St(F_{q}^{n}) coinvariants under GL vanish"), p);
        }
        for n in 1..=3 {
            let name = format!("St(F_{q}^{n}, V0) coinvariants under AT(V, V0) vanish, all V0 > 0");
            if let Some(c) = r.check(&name).filter(|c| c.status == Status::Pass) {
                relative += instances(c);
            } else {
                p.push(format!("{name}: missing or failing"));
            }
        }
    }
    format!("four ranks match, relative coinvariants vanish for {relative} pairs (V, V0)")
}

fn kunneth(p: &mut Vec<String>) -> String {
    let r = run(&config(Suite::Kunneth, &["2", "3"], (3, 3), 2));
    clean(&r, p);
    let mut total = 0;
    for q in [2, 3] {
        if let Some(w) = require_pass(&r, &format!("St(V,V0) = St(V/U,V0/U) x St(V,U) on F_{q}^3, all U <= V0"), p) {
            total += w.split_whitespace().next().and_then(|s| s.parse::<usize>().ok()).unwrap_or(0);
        }
    }
    format!("{total} pairs (V0, U)")
}

fn census(p: &mut Vec<String>) -> String {
    let r = run(&config(Suite::GroupCensus, &["2", "3"], (1, 4), 2));
    clean(&r, p);
    for (label, order) in [("symplectic F_3", 24), ("orthogonal F_3", 4), ("unitary F_4", 18)] {
        if let Some(w) = require_pass(&r, &format!("|isometries of H| against brute force: {label}"), p) {
            let want = format!("backtracking Some({order}), brute force {order},");
            require(p, w.starts_with(&want), format!("{label}: {w}"));
        }
    }
    let transitive = passing(&r, "transitive on each rank").count();
    require(p, transitive > 0, "no transitivity checks");
    let s = run(&config(Suite::StabilizerSequences, &["2", "3"], (2, 3), 2));
    clean(&s, p);
    let split = passing(&s, "stabilizer sequence splits").count();
    require(p, split >= 6, format!("only {split} stabilizer sequences"));
    format!("orders 24, 4, 18; {transitive} transitive pairings; {split} split sequences")
}

fn explicit_isometries(p: &mut Vec<String>) -> String {
    let mut cfg = config(Suite::EuclideanHyperbolization, &["2", "3", "2^2", "5"], (1, 3), 2);
    cfg.samples = Some(20);
    let r = run(&cfg);
    clean(&r, p);
    let mut n = 0;
    if let Some(c) =
        r.check("phi_E: (E,q) + (E,-q) -> H^n is a bijective isometry").filter(|c| c.status == Status::Pass)
    {
        n = instances(c);
    }
    require(p, n >= 20, format!("phi_E checked on {n} spaces"));
    require_pass(&r, "phi_E is natural for isometries of E", p);
    if let Some(w) = require_pass(&r, "Euclidean doubling: orthogonal F_5", p) {
        require(p, w.starts_with("property A"), format!("F_5: {w}"));
    }
    if let Some(w) = require_pass(&r, "Euclidean doubling: orthogonal F_3", p) {
        require(p, w.starts_with("property B") && w.ends_with("E^4 = H^2"), format!("F_3: {w}"));
    }
    require_pass(&r, "unitary rescaling preserves automorphisms: unitary F_4", p);
    format!("phi_E on {n} spaces, doubling over F_5 and F_3, rescaling over F_4")
}

fn lemma_battery(p: &mut Vec<String>) -> String {
    let mut cfg = config(Suite::ComplementLemmas, &["2", "3", "2^2"], (1, 4), 2);
    cfg.samples = Some(50);
    let r = run(&cfg);
    clean(&r, p);
    require(p, r.checks.len() == 10, format!("{} lemma tallies", r.checks.len()));
    let least = r.checks.iter().map(instances).min().unwrap_or(0);
    require(p, least >= 300, format!("a lemma saw only {least} instances"));
    format!("{} lemmas, at least {least} instances each", r.checks.len())
}

fn stability(p: &mut Vec<String>) -> String {
    let mut cfg = config(Suite::StabilitySmoke, &["2", "3"], (1, 2), 1);
    cfg.slow = true;
    let r = run(&cfg);
    clean(&r, p);
    for name in ["H_1(Sp_2(F_3)) = Z/3", "H_1(Sp_4(F_3)) = 0", "H_1(Sp_2(F_3)) -> H_1(Sp_4(F_3)) onto"] {
        require_pass(&r, name, p);
    }
    "Sp_2(F_3)^ab = Z/3, Sp_4(F_3)^ab = 0, map onto".to_string()
}

fn negative_controls(p: &mut Vec<String>) -> String {
    let f = run(&config(Suite::FormsAxioms, &["2", "3", "2^2", "5"], (1, 2), 1));
    clean(&f, p);
    require_pass(&f, "char-2 radical example: R(E + E') = <(1,1)>", p);
    require_pass(&f, "non-isometry rejected: 2 id on H over F_5", p);
    let c = run(&config(Suite::CohenMacaulay, &["2"], (1, 2), 1));
    clean(&c, p);
    require_pass(&c, "non-CM control rejected: two disjoint edges", p);
    "radical example, non-CM poset, non-isometry".to_string()
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { number: 1, title: "building dimensions and ranks", bound: secs(30), body: building_table },
        Criterion { number: 2, title: "Cohen-Macaulay buildings", bound: secs(300), body: cohen_macaulay },
        Criterion { number: 3, title: "filtration complex matches order complex", bound: None, body: filtration },
        Criterion { number: 4, title: "Steinberg ranks and coinvariants", bound: secs(120), body: steinberg },
        Criterion { number: 5, title: "Kunneth rank identity", bound: None, body: kunneth },
        Criterion {
            number: 6,
            title: "group census, transitivity, stabilizer sequences",
            bound: secs(120),
            body: census,
        },
        Criterion { number: 7, title: "explicit isometries", bound: None, body: explicit_isometries },
        Criterion { number: 8, title: "complement and induced form lemmas", bound: secs(60), body: lemma_battery },
        Criterion { number: 9, title: "degree-1 stability smoke", bound: secs(600), body: stability },
        Criterion { number: 10, title: "negative controls", bound: None, body: negative_controls },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let mut problems = Vec::new();
        let summary = (c.body)(&mut problems);
        let took = start.elapsed();
        if let Some(b) = c.bound.filter(|b| took > *b) {
            problems.push(format!("took {:.1} s, bound {} s", took.as_secs_f64(), b.as_secs()));
        }
        let bound = c.bound.map_or(String::new(), |b| format!(" (bound {} s)", b.as_secs()));
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}: {}; {summary}; {:.1} s{bound}", c.number, c.title, took.as_secs_f64());
        for p in &problems {
            println!("    {p}");
        }
        failed += usize::from(!problems.is_empty());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
