import subprocess
import sys

from conftest import GOLDEN
from rrvars.cli import main


def test_translate_to_file(tmp_path):
    out = tmp_path / "fig1.out.rrc"
    code = main(["translate", str(GOLDEN / "fig1.rrc"), "--devices", str(GOLDEN / "fig1.devices"), "-o", str(out)])
    assert code == 0
    assert out.read_text() == (GOLDEN / "fig1.out.rrc").read_text()


def test_translate_error_is_one_line(tmp_path, capsys):
    bad = tmp_path / "bad.rrc"
    bad.write_text("ref_t int unknowndev;\nint main() {}\n")
    assert main(["translate", str(bad), "--devices", str(GOLDEN / "fig1.devices")]) == 1
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and "unknowndev" in err


def test_translate_missing_file(capsys):
    assert main(["translate", "/nonexistent.rrc"]) == 1


def test_run_writes_trace_and_output(tmp_path, capsys):
    trace = tmp_path / "t.tsv"
    code = main(["run", str(GOLDEN / "fig8.rrc"), "--devices", str(GOLDEN / "fig8.devices"), "--trace", str(trace)])
    assert code == 0
    assert capsys.readouterr().out == "beep!\n"
    assert "57\tNOTE\tbeep\trfid=9780306406157\n" in trace.read_text()


def test_run_exit_codes(tmp_path):
    prog = tmp_path / "loop.rrc"
    prog.write_text("int main() { while (1) {} }\n")
    assert main(["run", str(prog), "--max-ticks", "20"]) == 5


def test_run_with_faults(tmp_path, capsys):
    faults = tmp_path / "f.txt"
    faults.write_text("seed=3\nmode=bernoulli p=0.05\n")
    code = main(["run", str(GOLDEN / "fig4.rrc"), "--faults", str(faults), "--trace", str(tmp_path / "t")])
    assert code in (0, 2)


def test_run_no_translate_on_instrumented(tmp_path, capsys):
    assert main(["run", str(GOLDEN / "fig4.out.rrc"), "--no-translate"]) == 0
    assert capsys.readouterr().out == "counter=10 redundance=3\n"


def test_simulate(tmp_path, capsys):
    faults = tmp_path / "f.txt"
    faults.write_text("seed=1\nmode=bernoulli p=0.02\n")
    trace = tmp_path / "sim.tsv"
    assert main(["simulate", "--degree", "5", "--faults", str(faults), "--reads", "50", "--trace", str(trace)]) == 0
    lines = trace.read_text().splitlines()
    assert sum("\tVOTE\tx\t" in l for l in lines) == 50
    assert "50 reads" in capsys.readouterr().err


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "rrvars.cli", "run", str(GOLDEN / "fig1.rrc"),
                        "--devices", str(GOLDEN / "fig1.devices"), "--trace", "-"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout == (GOLDEN / "fig1.trace").read_text()
