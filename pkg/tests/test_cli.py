import json
from datetime import datetime, timedelta, timezone

import pytest
from click.testing import CliRunner

from fesras.cli import main
from tests.conftest import FIXTURES, walkthrough_form


@pytest.fixture()
def runner():
    return CliRunner()


def generate_techniques(runner, out_dir) -> None:
    result = runner.invoke(
        main,
        ["generate", "--stories", str(FIXTURES / "stories.json"), "--out", str(out_dir)],
    )
    assert result.exit_code == 0, result.output


def write_report(path, minutes=52):
    start = datetime(2026, 3, 2, 14, 0, tzinfo=timezone.utc)
    payload = {
        "started_at": start.isoformat(),
        "ended_at": (start + timedelta(minutes=minutes)).isoformat(),
        "reviews": [{"story_id": "US1", "form": walkthrough_form().to_dict()}],
    }
    path.write_text(json.dumps(payload))


class TestParseCommand:
    def test_parse_prints_extraction(self, runner):
        result = runner.invoke(
            main, ["parse", "--stories", str(FIXTURES / "stories.json")]
        )
        assert result.exit_code == 0
        assert "US1: role='customer' verbs=['export'] nouns=['system']" in result.output

    def test_parse_json_output(self, runner):
        result = runner.invoke(
            main, ["parse", "--stories", str(FIXTURES / "stories.json"), "--json"]
        )
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data[0]["extraction"]["verbs"] == ["export"]

    def test_missing_file_exits_one(self, runner):
        result = runner.invoke(main, ["parse", "--stories", "no-such-file.json"])
        assert result.exit_code == 1
        assert "not found" in result.output

    def test_malformed_story_strict_vs_lenient(self, runner, tmp_path):
        stories = tmp_path / "bad.json"
        stories.write_text(
            json.dumps({"stories": [{"id": "B1", "text": "do the thing"}]})
        )
        strict = runner.invoke(main, ["parse", "--stories", str(stories)])
        assert strict.exit_code == 1
        lenient = runner.invoke(main, ["parse", "--stories", str(stories), "--lenient"])
        assert lenient.exit_code == 0
        assert "warning" in lenient.output


class TestGenerateCommand:
    def test_writes_technique_files_per_story(self, runner, tmp_path):
        out = tmp_path / "out"
        generate_techniques(runner, out)
        for story_id in ("US1", "US2"):
            assert (out / f"{story_id}.technique.json").exists()
            assert (out / f"{story_id}.technique.md").exists()

    def test_summary_lines(self, runner, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            ["generate", "--stories", str(FIXTURES / "stories.json"), "--out", str(out)],
        )
        assert "US1: linked C, 5 requirements" in result.output
        assert "US2: linked C, 5 requirements" in result.output

    def test_stories_processed_independently(self, runner, tmp_path):
        out = tmp_path / "out"
        generate_techniques(runner, out)
        us1 = json.loads((out / "US1.technique.json").read_text())
        us2 = json.loads((out / "US2.technique.json").read_text())
        assert us1["story"]["id"] == "US1"
        assert us2["story"]["id"] == "US2"
        assert us1["link"]["properties"] == ["C"]
        assert us2["link"]["properties"] == ["C"]


class TestRepoCommands:
    def test_list_contains_canonical_rows(self, runner):
        result = runner.invoke(main, ["repo", "list"])
        assert result.exit_code == 0
        assert "export" in result.output
        assert "table4" in result.output

    def test_add_and_reuse(self, runner, tmp_path):
        repo_file = tmp_path / "repo.json"
        result = runner.invoke(
            main,
            [
                "repo", "add",
                "--keyword", "two factor",
                "--properties", "IA",
                "--out", str(repo_file),
            ],
        )
        assert result.exit_code == 0
        data = json.loads(repo_file.read_text())
        keywords = {e["keyword"] for e in data["entries"]}
        assert "two factor" in keywords

    def test_add_weakening_fails(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "repo", "add",
                "--keyword", "export",
                "--properties", "I",
                "--out", str(tmp_path / "repo.json"),
            ],
        )
        assert result.exit_code == 1
        assert "canonical" in result.output

    def test_export(self, runner, tmp_path):
        out = tmp_path / "repo.json"
        result = runner.invoke(main, ["repo", "export", "--out", str(out)])
        assert result.exit_code == 0
        assert out.exists()


class TestRequirementsCommand:
    def test_catalog_export(self, runner, tmp_path):
        out = tmp_path / "requirements.json"
        result = runner.invoke(main, ["requirements", "--out", str(out)])
        assert result.exit_code == 0
        catalog = json.loads(out.read_text())
        assert len(catalog) == 15
        assert catalog[0]["id"] == "C1"
        assert "in transit AND when stored" in catalog[0]["review_text"]


class TestValidateAndScoreCommands:
    def test_validate_clean_report(self, runner, tmp_path):
        out = tmp_path / "out"
        generate_techniques(runner, out)
        report = tmp_path / "report.json"
        write_report(report)
        result = runner.invoke(
            main,
            ["validate", "--report", str(report), "--techniques", str(out)],
        )
        assert result.exit_code == 0
        assert "valid" in result.output

    def test_validate_findings_exit_two(self, runner, tmp_path):
        out = tmp_path / "out"
        generate_techniques(runner, out)
        form = walkthrough_form().to_dict()
        form["rows"][0]["am"] = ["SS9"]
        report = tmp_path / "report.json"
        start = datetime(2026, 3, 2, 14, 0, tzinfo=timezone.utc)
        report.write_text(
            json.dumps(
                {
                    "started_at": start.isoformat(),
                    "ended_at": (start + timedelta(minutes=30)).isoformat(),
                    "reviews": [{"story_id": "US1", "form": form}],
                }
            )
        )
        result = runner.invoke(
            main, ["validate", "--report", str(report), "--techniques", str(out)]
        )
        assert result.exit_code == 2
        assert "DanglingSpecId" in result.output

    def test_score_walkthrough(self, runner, tmp_path):
        out = tmp_path / "out"
        generate_techniques(runner, out)
        report = tmp_path / "report.json"
        write_report(report)
        result = runner.invoke(
            main,
            [
                "score",
                "--report", str(report),
                "--key", str(FIXTURES / "answer_key.json"),
                "--techniques", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["true_positives"] == 6
        assert payload["effectiveness"] == pytest.approx(6 / 13)

    def test_score_invalid_report_exits_two(self, runner, tmp_path):
        out = tmp_path / "out"
        generate_techniques(runner, out)
        report = tmp_path / "report.json"
        write_report(report, minutes=0)
        result = runner.invoke(
            main,
            [
                "score",
                "--report", str(report),
                "--key", str(FIXTURES / "answer_key.json"),
                "--techniques", str(out),
            ],
        )
        assert result.exit_code == 2


class TestCompareCommand:
    def test_compare_table_and_json(self, runner, tmp_path):
        scores = tmp_path / "scores.json"
        scores.write_text(
            json.dumps(
                {
                    "trials": {
                        "1": [
                            {"group": "treatment", "inspector": "t1", "effectiveness": 0.54, "efficiency": 15},
                            {"group": "treatment", "inspector": "t2", "effectiveness": 0.62, "efficiency": 17},
                            {"group": "treatment", "inspector": "t3", "effectiveness": 0.46, "efficiency": 12},
                            {"group": "treatment", "inspector": "t4", "effectiveness": 0.69, "efficiency": 21},
                            {"group": "control", "inspector": "c1", "effectiveness": 0.23, "efficiency": 4},
                            {"group": "control", "inspector": "c2", "effectiveness": 0.15, "efficiency": 3},
                            {"group": "control", "inspector": "c3", "effectiveness": 0.31, "efficiency": 6},
                            {"group": "control", "inspector": "c4", "effectiveness": 0.23, "efficiency": 5},
                        ]
                    }
                }
            )
        )
        table = runner.invoke(main, ["compare", "--scores", str(scores)])
        assert table.exit_code == 0, table.output
        assert "effectiveness" in table.output

        machine = runner.invoke(main, ["compare", "--scores", str(scores), "--json"])
        report = json.loads(machine.output)
        metric = report["trials"]["1"]["metrics"]["effectiveness"]
        assert metric["reject_null"] is True
        assert metric["method"] == "exact"
