import numpy as np
import pytest

from maqaoa import (
    Graph,
    RunConfig,
    derive_seed,
    enumerate_connected,
    load_dataset,
    read_records,
    report,
    run_experiment,
    write_edge_list,
    write_records,
)
from maqaoa.cli import main
from maqaoa.records import CSV_HEADER


def rows_without_wall_time(records):
    return [r.to_row()[:-1] for r in records]


# ----- seeds -----

def test_derive_seed_is_stable_and_spread():
    a = derive_seed(0, "g4-abc", "normal", 1, 0)
    assert a == derive_seed(0, "g4-abc", "normal", 1, 0)
    others = {
        derive_seed(0, "g4-abc", "normal", 1, 1),
        derive_seed(0, "g4-abc", "normal", 2, 0),
        derive_seed(0, "g4-abc", "random_pi8_opt", 1, 0),
        derive_seed(1, "g4-abc", "normal", 1, 0),
        derive_seed(0, "g4-abd", "normal", 1, 0),
    }
    assert a not in others
    assert len(others) == 5
    assert 0 <= a < 1 << 63


# ----- datasets -----

def test_load_dataset_builtin():
    graphs = load_dataset("builtin:n4", 0)
    assert graphs == enumerate_connected(4)


def test_load_dataset_random_reproducible():
    a = load_dataset("random:n=7,count=4", 5)
    b = load_dataset("random:n=7,count=4", 5)
    assert a == b
    assert len(a) == 4
    explicit = load_dataset("random:n=7,count=4,seed=9", 123)
    again = load_dataset("random:n=7,count=4,seed=9", 456)
    assert explicit == again  # explicit seed overrides the master seed


def test_load_dataset_files(tmp_path, path4, triangle):
    edges = tmp_path / "set.edges"
    write_edge_list([path4, triangle], edges)
    assert load_dataset(f"edges:{edges}", 0) == [path4, triangle]
    g6 = tmp_path / "set.g6"
    g6.write_text("A_\nC~\n")
    loaded = load_dataset(f"g6:{g6}", 0)
    assert [g.n for g in loaded] == [2, 4]


def test_load_dataset_errors():
    for bad in ("builtin:4", "nocolon", "mystery:x", "random:n=5", "random:n=5,count=2,k=3"):
        with pytest.raises(ValueError):
            load_dataset(bad, 0)
    with pytest.raises(FileNotFoundError):
        load_dataset("g6:/nonexistent/file.g6", 0)


# ----- run config -----

def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(dataset="builtin:n3", p_values=())
    with pytest.raises(ValueError):
        RunConfig(dataset="builtin:n3", p_values=(0,))
    with pytest.raises(ValueError):
        RunConfig(dataset="builtin:n3", strategies=("bogus",))
    with pytest.raises(ValueError):
        RunConfig(dataset="builtin:n3", strategies=("rounded_no_opt",))
    with pytest.raises(ValueError):
        RunConfig(dataset="builtin:n3", replicates=0)
    with pytest.raises(ValueError):
        RunConfig(dataset="builtin:n3", threads=0)


# ----- experiment runs -----

def test_run_counts_and_order():
    config = RunConfig(dataset="builtin:n4", p_values=(1, 2, 3), seed=1)
    records = run_experiment(config)
    assert len(records) == 6 * 3 * 5
    # graphs in id order, then (p, strategy rank, replicate) inside a graph
    ids = [r.graph_id for r in records]
    assert ids == sorted(ids, key=lambda s: ids.index(s))  # block structure
    blocks = {gid: [r for r in records if r.graph_id == gid] for gid in set(ids)}
    for block in blocks.values():
        assert len(block) == 15
        assert [r.p for r in block] == sorted(r.p for r in block)


def test_run_is_deterministic_modulo_wall_time():
    config = RunConfig(
        dataset="builtin:n3", p_values=(1, 2), strategies=("normal", "rounded_no_opt"),
        replicates=2, seed=3,
    )
    a = run_experiment(config)
    b = run_experiment(config)
    assert rows_without_wall_time(a) == rows_without_wall_time(b)


def test_normal_p3_saturates_four_vertex_graphs():
    config = RunConfig(
        dataset="builtin:n4", p_values=(3,), strategies=("normal",), seed=0
    )
    records = run_experiment(config)
    assert len(records) == 6
    for r in records:
        assert abs(r.final_ar - 1.0) < 5e-4


def test_optimizing_strategy_never_beats_its_start_backwards():
    config = RunConfig(
        dataset="builtin:n3", p_values=(1,), strategies=("random_pi8_opt",), seed=4
    )
    for r in run_experiment(config):
        assert r.final_ar >= r.initial_ar - 1e-12


def test_threads_do_not_change_results():
    config = RunConfig(
        dataset="builtin:n3", p_values=(1,), strategies=("normal",), seed=5
    )
    serial = run_experiment(config)
    parallel = run_experiment(
        RunConfig(
            dataset="builtin:n3", p_values=(1,), strategies=("normal",),
            seed=5, threads=2,
        )
    )
    assert rows_without_wall_time(serial) == rows_without_wall_time(parallel)


def test_run_streams_records_csv(tmp_path):
    out = tmp_path / "run"
    config = RunConfig(
        dataset="builtin:n3", p_values=(1,), strategies=("normal",),
        seed=6, out_dir=str(out),
    )
    records = run_experiment(config)
    stored = read_records(out / "records.csv")
    assert rows_without_wall_time(stored) == rows_without_wall_time(records)


# ----- persistence -----

def test_records_roundtrip(tmp_path):
    config = RunConfig(dataset="builtin:n3", p_values=(1,), seed=7)
    records = run_experiment(config)
    path = tmp_path / "records.csv"
    write_records(records, path)
    loaded = read_records(path)
    assert [r.to_row() for r in loaded] == [r.to_row() for r in records]
    assert loaded[0].edges == records[0].edges
    np.testing.assert_allclose(
        loaded[0].final_angles, records[0].final_angles, rtol=1e-11
    )


def test_read_records_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_records(path)


def test_read_records_rejects_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(",".join(CSV_HEADER) + "\n")
    with pytest.raises(ValueError):
        read_records(path)


# ----- report -----

@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("small_run")
    config = RunConfig(
        dataset="builtin:n4", p_values=(1, 2), replicates=1, seed=8,
        out_dir=str(out),
    )
    run_experiment(config)
    return out / "records.csv"


def test_report_writes_expected_files(small_run, tmp_path):
    out = tmp_path / "report"
    files = report(small_run, out)
    names = sorted(f.name for f in files)
    assert names == [
        "aggregate.csv",
        "angle_concentration.csv",
        "angle_histogram.csv",
        "ar_difference_histogram.csv",
        "ar_difference_summary.csv",
        "forest_summary.csv",
        "max_degree_zero.csv",
    ]
    aggregate = (out / "aggregate.csv").read_text().splitlines()
    assert aggregate[0] == "n,p,strategy,mean_ar,std_ar,graph_count"
    assert len(aggregate) == 1 + 2 * 5  # (p, strategy) groups for n=4


def test_report_is_deterministic(small_run, tmp_path):
    first = {f.name: f.read_bytes() for f in report(small_run, tmp_path / "r1")}
    second = {f.name: f.read_bytes() for f in report(small_run, tmp_path / "r2")}
    assert first == second


def test_report_rejects_empty_records(tmp_path):
    empty = tmp_path / "records.csv"
    empty.write_text(",".join(CSV_HEADER) + "\n")
    with pytest.raises(ValueError):
        report(empty, tmp_path / "out")
    assert not (tmp_path / "out").exists()


# ----- CLI -----

def test_cli_run_and_report(tmp_path, capsys):
    out = tmp_path / "cli_run"
    code = main(
        [
            "run",
            "--dataset", "builtin:n3",
            "--p", "1",
            "--strategies", "normal,rounded_no_opt",
            "--seed", "9",
            "--out", str(out),
        ]
    )
    assert code == 0
    assert "wrote 4 records" in capsys.readouterr().out
    assert (out / "records.csv").exists()

    report_dir = tmp_path / "cli_report"
    code = main(
        ["report", "--records", str(out / "records.csv"), "--out", str(report_dir)]
    )
    assert code == 0
    assert (report_dir / "aggregate.csv").exists()


def test_cli_rejects_bad_dataset(tmp_path, capsys):
    code = main(["run", "--dataset", "builtin:q", "--out", str(tmp_path / "x")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_cli_entry_point_is_registered():
    from importlib.metadata import entry_points

    scripts = entry_points(group="console_scripts")
    names = {ep.name for ep in scripts}
    assert "maqaoa" in names
