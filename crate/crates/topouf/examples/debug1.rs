use topouf::analysis::ShotRunner;
use topouf::{build_code, build_decoding_graph, Basis, CodeFamily, CodeSpec, DecoderConfig, PauliKind};

fn main() {
    let code = build_code(CodeSpec::new(CodeFamily::RotatedToric, 6).unwrap());
    let gx = build_decoding_graph(&code, Basis::XChecks, 1);
    let gz = build_decoding_graph(&code, Basis::ZChecks, 1);
    let mut runner = ShotRunner::new(&code, &gx, &gz);
    let kinds = [PauliKind::X, PauliKind::Y, PauliKind::Z];
    let n = code.n();
    'outer: for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for pat in 0..27usize {
                    let comps = vec![
                        (a as u32, kinds[pat % 3]),
                        (b as u32, kinds[(pat / 3) % 3]),
                        (c as u32, kinds[(pat / 9) % 3]),
                    ];
                    if let Err(e) = runner.run(&DecoderConfig::uf(), &comps, &[]) {
                        println!("FAIL {comps:?}: {e}");
                        break 'outer;
                    }
                }
            }
        }
    }
    println!("scan done");
}
