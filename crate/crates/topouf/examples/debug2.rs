use topouf::analysis::ShotRunner;
use topouf::{build_code, build_decoding_graph, Basis, CodeFamily, CodeSpec, DecoderConfig, PauliKind};

fn main() {
    let code = build_code(CodeSpec::new(CodeFamily::RotatedToric, 6).unwrap());
    let gx = build_decoding_graph(&code, Basis::XChecks, 1);
    let gz = build_decoding_graph(&code, Basis::ZChecks, 1);
    let comps = vec![
        (0u32, PauliKind::Y),
        (1u32, PauliKind::Y),
        (6u32, PauliKind::Y),
    ];
    // fresh runner: does the isolated case fail?
    let mut fresh = ShotRunner::new(&code, &gx, &gz);
    match fresh.run(&DecoderConfig::uf(), &comps, &[]) {
        Ok(o) => println!("fresh: ok failure={} synd_ok={}", o.failure, o.syndrome_ok),
        Err(e) => println!("fresh: ERR {e}"),
    }
    // run an unrelated decode first, then the case
    let mut reused = ShotRunner::new(&code, &gx, &gz);
    reused
        .run(&DecoderConfig::uf(), &[(14, PauliKind::Z)], &[])
        .unwrap();
    match reused.run(&DecoderConfig::uf(), &comps, &[]) {
        Ok(o) => println!("reused: ok failure={} synd_ok={}", o.failure, o.syndrome_ok),
        Err(e) => println!("reused: ERR {e}"),
    }
}
