import json

from baire import cli


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    doc = json.loads(captured.out) if captured.out.strip() else None
    return code, doc, captured.err


def test_splitter_hand_trace(capsys):
    code, doc, _ = run_cli(
        capsys, "splitter", "run",
        "--x", '{"prefix":["1"],"tail":{"kind":"zero"}}',
        "--b", "dyadic", "--stages", "1", "--verify")
    assert code == 0
    assert doc["schema_version"] == "1"
    stage = doc["result"]["stages"][0]
    assert stage["k"] == 5
    assert stage["y"] == ["1/5", "-1/5", "1/5", "-1/5", "1/5"]
    assert doc["verification"]["ok"] is True


def test_antispecker_all_star_demo(capsys):
    code, doc, _ = run_cli(
        capsys, "antispecker", "demo", "--space", '{"kind":"cantor"}',
        "--sequence", "all-star")
    assert code == 0
    assert doc["result"]["value"] == 0
    assert doc["result"]["certificate"] == [{"sigma": [], "n": 0}]


def test_k2_star_exhaustion_is_exit_three(capsys):
    code, doc, _ = run_cli(capsys, "k2", "star", "--f", "const:0",
                           "--g", "const:0", "--fuel", "10")
    assert code == 3
    assert doc["result"]["kind"] == "exhausted"


def test_k2_codec_commands(capsys):
    code, doc, _ = run_cli(capsys, "k2", "encode", "--seq", "5")
    assert code == 0 and doc["result"]["code"] == 21
    code, doc, _ = run_cli(capsys, "k2", "decode", "--code", "21")
    assert code == 0 and doc["result"]["seq"] == [5]


def test_k2_star_with_tracking(capsys):
    code, doc, _ = run_cli(
        capsys, "k2", "star",
        "--f", '{"tail":{"kind":"registry","name":"depth_answer",'
               '"params":{"depth":2,"n":0,"m":1}}}',
        "--g", "identity", "--fuel", "8", "--track")
    assert code == 0
    assert doc["result"]["fired_at"] == 2
    assert doc["usage"]["g_max"] == 1


def test_reals_commands(capsys):
    code, doc, _ = run_cli(capsys, "reals", "from-rational", "--q", "1/3",
                           "--prec", "10")
    assert code == 0
    code, doc, _ = run_cli(capsys, "reals", "approx",
                           "--x", '{"int":0,"digits":[1,1,1],"tail":"zero"}',
                           "--prec", "3")
    assert doc["result"]["approx"] == "7/8"
    code, doc, _ = run_cli(capsys, "reals", "compare",
                           "--x", '{"rational":"0"}', "--q", "1", "--prec", "1")
    assert doc["result"]["comparison"] == "below"
    code, doc, _ = run_cli(capsys, "reals", "max", "--x", '{"rational":"0"}',
                           "--y", '{"rational":"1"}', "--prec", "5")
    assert doc["result"]["approx"] == "1"


def test_spaces_commands(capsys):
    code, doc, _ = run_cli(
        capsys, "spaces", "dist", "--space", '{"kind":"cantor"}',
        "--f", '{"table":[[0,1]],"tail":{"kind":"constant","value":2}}',
        "--g", "const:1", "--prec", "8")
    assert code == 0
    assert doc["result"]["dist"] == "1/2"
    assert doc["result"]["dist_stream_approx"] == "1/2"
    code, doc, _ = run_cli(capsys, "spaces", "check",
                           "--space", '{"kind":"finite","n":3}',
                           "--name", "const:4")
    assert doc["result"]["in_domain"] is False


def test_antispecker_probe(capsys):
    code, doc, _ = run_cli(capsys, "antispecker", "probe",
                           "--space", '{"kind":"finite","n":2}',
                           "--budget", "60")
    assert code == 0
    assert doc["result"]["members"]
    assert doc["result"]["exhausted"] is True


def test_antispecker_covers(capsys):
    theta = '[{"sigma":[[0,1]],"n":1},{"sigma":[[0,2]],"n":1}]'
    code, doc, _ = run_cli(capsys, "antispecker", "covers",
                           "--space", '{"kind":"cantor"}', "--theta", theta)
    assert code == 0 and doc["result"]["covered"] is True


def test_rpt_commands(capsys):
    a = '{"prefix":["1"],"tail":{"kind":"constant","value":"1"}}'
    code, doc, _ = run_cli(capsys, "rpt", "fabar", "--a", a, "--n", "3")
    assert code == 0 and doc["result"]["settling_index"] == 5
    code, doc, _ = run_cli(capsys, "rpt", "decide", "--a", a, "--n", "3",
                           "--m", "4")
    assert doc["result"]["case"] == "window"
    assert (doc["result"]["i"], doc["result"]["j"]) == (4, 4)


def test_pc_command(capsys):
    code, doc, _ = run_cli(
        capsys, "pc", "realize",
        "--x", '{"prefix":[],"tail":{"kind":"geometric","base":"1","ratio":"1/2"}}',
        "--f", '{"tail":{"kind":"registry","name":"identity"}}',
        "--g", "identity", "--n", "4")
    assert code == 0 and doc["result"]["index"] == 0


def test_bdn_commands(capsys):
    code, doc, _ = run_cli(
        capsys, "bdn", "extract", "--g", "const:0",
        "--h", '{"tail":{"kind":"constant","value":2}}', "--fuel", "20")
    assert code == 0 and doc["result"]["bound"] == 1
    code, doc, _ = run_cli(capsys, "bdn", "adversary", "--alpha", "const:3",
                           "--fuel", "4000")
    assert code == 0 and doc["result"]["verdict"] == "refuted"
    code, doc, _ = run_cli(capsys, "bdn", "adversary", "--alpha", "const:0",
                           "--fuel", "300")
    assert code == 3 and doc["result"]["verdict"] == "inconclusive"


def test_outputs_are_byte_identical(capsys):
    argv = ["splitter", "run", "--x", '{"prefix":["1"],"tail":{"kind":"zero"}}',
            "--b", "dyadic", "--stages", "2", "--verify"]
    cli.run(argv)
    first = capsys.readouterr().out
    cli.run(argv)
    second = capsys.readouterr().out
    assert first == second


def test_validation_failures_are_exit_two(capsys):
    code, _, err = run_cli(capsys, "splitter", "run", "--x", '{"prefix":["-1"]}',
                           "--b", "dyadic", "--stages", "1")
    assert code == 2 and "error" in err
    code, _, _ = run_cli(capsys, "k2", "star", "--f", "nope:1", "--g", "const:0")
    assert code == 2
    code, _, _ = run_cli(capsys, "k2", "star", "--frobnicate", "1")
    assert code == 2


def test_missing_modulus_oracle_rejected(capsys):
    code, _, err = run_cli(capsys, "pc", "realize", "--x", '{"prefix":["1"]}',
                           "--f", "identity", "--g", "const:0", "--n", "1")
    assert code == 2  # g below the identity
