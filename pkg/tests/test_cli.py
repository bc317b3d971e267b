from __future__ import annotations

import pytest

from citenv.cli import main
from citenv.pipeline import PipelineConfig, config_from, load_config


class TestEnvCommand:
    def test_demo_summary(self, demo_links_dir, tmp_path, capsys):
        code = main(
            [
                "env",
                "--links", str(demo_links_dir / "links.csv"),
                "--total", "76904",
                "--self", "7512",
                "--seed", "ANGEW CHEM INT EDIT",
                "--out", str(tmp_path),
            ]
        )
        assert code == 0
        assert capsys.readouterr().out == "threshold=693 selected=22\n"
        assert (tmp_path / "environment.csv").exists()

    def test_seed_defaults_to_international_edition(self, demo_links_dir, tmp_path, capsys):
        code = main(
            [
                "env",
                "--links", str(demo_links_dir / "links.csv"),
                "--total", "76904",
                "--self", "7512",
                "--out", str(tmp_path),
            ]
        )
        assert code == 0
        assert "selected=22" in capsys.readouterr().out


class TestErrors:
    def test_unknown_command_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 1
        assert "usage" in capsys.readouterr().err

    def test_no_command_exits_1(self, capsys):
        assert main([]) == 1
        assert "usage" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code = main(["env", "--links", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
        assert code == 2
        assert "i/o error" in capsys.readouterr().err

    def test_validation_error_exits_1(self, demo_links_dir, tmp_path, capsys):
        code = main(
            [
                "env",
                "--links", str(demo_links_dir / "links.csv"),
                "--cosine-cutoff", "1.5",
                "--out", str(tmp_path),
            ]
        )
        assert code == 1
        assert "cosine_cutoff" in capsys.readouterr().err

    def test_missing_prerequisite_stage_exits_1(self, demo_links_dir, tmp_path, capsys):
        code = main(
            [
                "matrix",
                "--links", str(demo_links_dir / "links.csv"),
                "--out", str(tmp_path),
            ]
        )
        assert code == 1
        assert "environment" in capsys.readouterr().err

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("citenv ")


class TestConfigFile:
    def test_values_loaded(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text(
            "# demo configuration\n"
            'seed_journal = "ANGEW CHEM INT EDIT"\n'
            "total_cites = 76904\n"
            "self_cites = 7512\n"
            "cosine_cutoff = 0.3\n"
            "include_diagonal = false\n"
        )
        values = load_config(cfg_file)
        cfg = config_from(values, {})
        assert cfg.total_cites == 76904
        assert cfg.cosine_cutoff == 0.3
        assert cfg.include_diagonal is False

    def test_flags_override_file(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("total_cites = 100\n")
        cfg = config_from(load_config(cfg_file), {"total_cites": 76904})
        assert cfg.total_cites == 76904

    def test_unknown_key_rejected(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("no_such_knob = 1\n")
        from citenv.errors import CitenvError

        with pytest.raises(CitenvError):
            load_config(cfg_file)

    def test_cli_uses_config(self, demo_links_dir, tmp_path, capsys):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text(
            f"links = {demo_links_dir / 'links.csv'}\ntotal_cites = 76904\nself_cites = 7512\n"
            f"out_dir = {tmp_path / 'out'}\n"
        )
        assert main(["env", "--config", str(cfg_file)]) == 0
        assert capsys.readouterr().out == "threshold=693 selected=22\n"

    def test_defaults_match_documented_parameters(self):
        cfg = PipelineConfig()
        assert cfg.cosine_cutoff == 0.2
        assert cfg.loading_cutoff == 0.4
        assert cfg.include_diagonal is True
        assert cfg.edge_length == 1.0
        assert cfg.spring_constant == 1.0
        assert cfg.layout_eps == 1e-4


class TestMiniPipeline:
    def test_stage_summaries_and_files(self, mini_inputs, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["pipeline", *mini_inputs["args"], "--out", str(out)])
        assert code == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "doubles=17 corrected=128 overrepresentation_pct=13.3"
        assert lines[1] == "threshold=25 selected=4"
        assert lines[2].startswith("journals=4 total=")
        for name in (
            "table2.csv", "environment.csv", "matrix.csv", "shares.csv",
            "table3.csv", "edges.csv", "nodes.csv", "positions.csv",
            "figure.svg", "graph.net",
        ):
            assert (out / name).exists(), name

    def test_report_command(self, mini_inputs, tmp_path, capsys):
        out = tmp_path / "reports"
        code = main(["report", *mini_inputs["args"], "--out", str(out)])
        assert code == 0
        assert "reports=" in capsys.readouterr().out
        assert (out / "table3.csv").exists()

    def test_report_without_refs_names_missing_stage(self, mini_inputs, tmp_path, capsys):
        args = [a for a in mini_inputs["args"]]
        refs_at = args.index("--refs")
        del args[refs_at : refs_at + 2]
        code = main(["report", *args, "--out", str(tmp_path / "r")])
        assert code == 1
        assert "dedup" in capsys.readouterr().err
