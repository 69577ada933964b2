//! Hot-path benchmarks: blockage queries, path-loss evaluation, single-link
//! budgets, power aggregation, and a small end-to-end Monte Carlo run.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ebandsim_core::engine::{evaluate_link, place_stations, run, RunOptions, UserTerminal};
use ebandsim_core::geo::{unproject, BlockageQuery, BuildingIndex, GeoPoint, PlanarPoint};
use ebandsim_core::ingest::Scenario;
use ebandsim_core::propagation::{path_loss_db, PathLossConfig};
use ebandsim_core::synth::{
    generate_manhattan, generate_registry, ManhattanParams, RegistryParams,
};

fn origin() -> GeoPoint {
    GeoPoint::new(-87.63, 41.88).unwrap()
}

fn square_scenario(half_m: f64, ue_count: u32, realizations: u32) -> Scenario {
    let o = origin();
    let area = [
        (-half_m, -half_m),
        (half_m, -half_m),
        (half_m, half_m),
        (-half_m, half_m),
    ]
    .iter()
    .map(|&(x, y)| unproject(PlanarPoint::new(x, y), o))
    .collect();
    Scenario {
        origin: o,
        area_polygon: area,
        ue_count,
        ue_height_m: 1.5,
        gnb_height_m: 6.0,
        eirp_max_dbm: 33.0,
        carrier_ghz: 73.5,
        realizations,
        seed: 7,
        inr_threshold_db: -6.0,
        ue_beam_cap: true,
    }
}

fn manhattan_index() -> BuildingIndex {
    let grid = ManhattanParams {
        blocks_x: 16,
        blocks_y: 16,
        ..ManhattanParams::default()
    };
    BuildingIndex::build(generate_manhattan(&grid, 7).unwrap())
}

fn bench_blockage(c: &mut Criterion) {
    let index = manhattan_index();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let queries: Vec<BlockageQuery> = (0..1024)
        .map(|_| BlockageQuery {
            ue_pos: PlanarPoint::new(
                rng.random_range(-700.0..700.0),
                rng.random_range(-700.0..700.0),
            ),
            ue_height_m: 1.5,
            fs_pos: PlanarPoint::new(
                rng.random_range(-700.0..700.0),
                rng.random_range(-700.0..700.0),
            ),
            fs_height_m: rng.random_range(10.0..60.0),
        })
        .collect();
    let mut i = 0;
    c.bench_function("blockage_query_manhattan_256_footprints", |b| {
        b.iter(|| {
            i = (i + 1) % queries.len();
            black_box(ebandsim_core::geo::is_blocked(&queries[i], &index))
        })
    });
}

fn bench_path_loss(c: &mut Criterion) {
    let cfg = PathLossConfig::new(73.5).unwrap().with_shadowing(false);
    c.bench_function("path_loss_nlos_300m", |b| {
        b.iter(|| {
            black_box(
                path_loss_db(
                    &cfg,
                    black_box(300.0),
                    black_box(1.5),
                    black_box(25.0),
                    black_box(true),
                    black_box(0.0),
                )
                .unwrap(),
            )
        })
    });
}

fn bench_single_link(c: &mut Criterion) {
    let index = manhattan_index();
    let scenario = square_scenario(700.0, 1, 1);
    let stations = generate_registry(
        &RegistryParams {
            n_links: 1,
            radius_km: 0.5,
            ..RegistryParams::default()
        },
        7,
    )
    .unwrap();
    let placed = place_stations(&stations, &scenario).unwrap();
    let ue = UserTerminal {
        pos: PlanarPoint::new(120.0, -80.0),
        height_m: 1.5,
        beam_azimuth_deg: 40.0,
        beam_elevation_deg: 5.0,
        antenna: ebandsim_core::antenna::UeAntenna::with_eirp(33.0).unwrap(),
    };
    let cfg = PathLossConfig::new(73.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    c.bench_function("evaluate_link_with_blockage_and_shadowing", |b| {
        b.iter(|| black_box(evaluate_link(0, &ue, &placed[0], &index, &cfg, &mut rng).unwrap()))
    });
}

fn bench_aggregate(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let contributions: Vec<f64> = (0..100).map(|_| rng.random_range(-140.0..-60.0)).collect();
    c.bench_function("aggregate_dbm_100_links", |b| {
        b.iter(|| {
            black_box(ebandsim_core::engine::aggregate_dbm(black_box(
                &contributions,
            )))
        })
    });
}

fn bench_small_run(c: &mut Criterion) {
    let index = manhattan_index();
    let scenario = square_scenario(700.0, 20, 10);
    let stations = generate_registry(
        &RegistryParams {
            n_links: 10,
            radius_km: 0.5,
            ..RegistryParams::default()
        },
        7,
    )
    .unwrap();
    c.bench_function("run_20ue_10fs_10realizations", |b| {
        b.iter(|| black_box(run(&scenario, &stations, &index, &RunOptions::default()).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_blockage,
    bench_path_loss,
    bench_single_link,
    bench_aggregate,
    bench_small_run
);
criterion_main!(benches);
