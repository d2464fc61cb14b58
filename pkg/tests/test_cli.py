import json

from click.testing import CliRunner

from medley.cli import main


def test_recommend_writes_ranked_collections(tmp_path, superstore_bytes):
    data = tmp_path / "data.csv"
    data.write_bytes(superstore_bytes)
    runner = CliRunner()
    result = runner.invoke(main, ["recommend", "--data", str(data),
                                  "--attrs", "Profit", "--intents", "change"])
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert [c["templateCode"] for c in doc["collections"]] == ["CH1", "CH2"]


def test_recommend_top_and_out(tmp_path, superstore_bytes):
    data = tmp_path / "data.csv"
    data.write_bytes(superstore_bytes)
    out = tmp_path / "out.json"
    runner = CliRunner()
    result = runner.invoke(main, ["recommend", "--data", str(data),
                                  "--top", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text())
    assert len(doc["collections"]) == 3
