import csv

from marx.cli import main
from marx.querylang import parse_query
from marx.report import write_report
from marx.service.core import Workspace, load_run_config

from test_service import sr3_run_config


def test_report_files_for_infeasible_query(tmp_path):
    workspace = Workspace.from_config(
        load_run_config(sr3_run_config(tmp_path)))
    query = parse_query("obstacle:r1,r2 -> victim:r1 -> fire:r2,r3",
                        workspace.mmdp)
    answer = workspace.answer(query)
    out_dir = tmp_path / "report"
    written = write_report(workspace.mmdp, answer, query, out_dir)
    names = {p.name for p in written}
    assert {"summary.csv", "explanations.csv", "mmdp.png",
            "timings.png"} <= names

    with open(out_dir / "summary.csv", newline="", encoding="utf-8") as fh:
        rows = {row["metric"]: row["value"] for row in csv.DictReader(fh)}
    assert rows["verdict"] == "infeasible"
    assert rows["finalQuery"] == "fire:r2,r3 -> obstacle:r1,r2 -> victim:r1,r3"
    assert int(rows["failures"]) == 2

    with open(out_dir / "explanations.csv", newline="",
              encoding="utf-8") as fh:
        clauses = list(csv.DictReader(fh))
    assert len(clauses) == 2
    assert any("fighting the fire" in c["text"] for c in clauses)

    for png in ("mmdp.png", "plan.png", "timings.png"):
        data = (out_dir / png).read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"


def test_report_cli_subcommand(tmp_path, capsys):
    config = sr3_run_config(tmp_path)
    out_dir = tmp_path / "r"
    code = main(["report", "--config", str(config), "--out-dir", str(out_dir),
                 "--query", "fire:r2,r3 -> victim:r1,r3"])
    assert code == 0
    output = capsys.readouterr().out
    assert "FEASIBLE" in output
    assert (out_dir / "summary.csv").exists()
    assert (out_dir / "mmdp.png").exists()
    assert (out_dir / "plan.png").exists()
