use topouf::analysis::enumerate_undecodable;
use topouf::{build_code, CodeFamily, CodeSpec, DecoderConfig};

fn main() {
    let code = build_code(CodeSpec::new(CodeFamily::RotatedToric, 6).unwrap());
    for (name, config) in [
        ("UF", DecoderConfig::uf()),
        ("IRUF-1", DecoderConfig::iruf(1)),
        ("UIUF", DecoderConfig::uiuf()),
    ] {
        let t0 = std::time::Instant::now();
        let res = enumerate_undecodable(&code, &config, 3, 1 << 40).unwrap();
        println!(
            "{name}: total={} failures={} xxx={} zzz={} yyy={} mixed={} mismatches={} ({:?})",
            res.total_cases, res.failures, res.xxx, res.zzz, res.yyy, res.mixed,
            res.syndrome_mismatches, t0.elapsed()
        );
    }
}
