import pytest

from conftest import GOLDEN, corpus_programs
from rrvars.devices import DeviceConfig, cpu_sensor, tcp_tx_rate
from rrvars.interpreter import Interpreter, run
from rrvars.lang import parse, tokenize
from rrvars.redundancy import FaultScenario
from rrvars.runtime import Runtime
from rrvars.trace import parse_trace
from rrvars.translator import translate


def output_of(body, decls="int x; float f; string s;"):
    r = run(f"{decls}\nint main() {{ {body} }}")
    assert r.exit_code == 0, r.error
    return r.output


def test_eval_precedence():
    assert output_of("print(2 + 3 * 4);") == "14\n"


def test_eval_comparison_with_sensor():
    r = run("ref_t int cpu; int main() { sleep(1); print(cpu > 90); }", [cpu_sensor([93])])
    assert r.output == "1\n"


def test_division_by_zero_traps():
    r = run("int main() { print(5 / 0); }")
    assert r.exit_code == 4
    assert "trap" in r.trace


def test_float_division_by_zero_traps():
    assert run("float f = 1.0; int main() { print(f / 0); }").exit_code == 4


def test_modulo_by_zero_traps():
    assert run("int main() { print(5 % 0); }").exit_code == 4


def test_print_formatting():
    assert output_of('x = 7; print("x=", x);') == "x=7\n"
    assert output_of('f = 1; print(f, " ", 0.5);') == "1.0 0.5\n"


def test_c_integer_semantics():
    assert output_of("print(-7 / 2, \" \", -7 % 2, \" \", 7 / -2, \" \", 7 % -2);") == "-3 -1 -3 1\n"


def test_logical_operators_are_strict():
    r = run("int main() { print(0 && 1 / 0); }")
    assert r.exit_code == 4


def test_while_advances_one_tick_per_iteration():
    r = run("ref_t int cpu; int n; int main() { while (n < 3) { print(cpu); n = n + 1; } }",
            [cpu_sensor([10, 20, 30])])
    assert r.output == "10\n20\n30\n"


def test_sleep_advances_ticks():
    r = run("ref_t int cpu; int main() { sleep(2); print(cpu); sleep(0); print(cpu); }",
            [cpu_sensor([10, 20, 30])])
    assert r.output == "20\n20\n"


def test_fig1_loop_acts_once_on_short_trace():
    cfg = DeviceConfig([cpu_sensor([10, 50, 93]), tcp_tx_rate(512)])
    # poll exactly as many times as the trace has readings
    src = (GOLDEN / "fig1.rrc").read_text().replace("polls < 5", "polls < 3")
    r = run(src, cfg)
    assert r.exit_code == 0
    assert r.actuators == [(3, "tcpTxRate", 256)]
    assert len([rec for rec in parse_trace(r.trace) if rec[1] == "ACT"]) == 1


def test_untranslated_attributed_program_is_refused():
    r = run("ref_t int cpu; int main() {}", [cpu_sensor([1])], translate=False)
    assert r.exit_code == 1 and "translate" in r.error


def test_instrumented_program_runs_without_translation():
    src = translate((GOLDEN / "fig4.rrc").read_text())
    plain = run((GOLDEN / "fig4.rrc").read_text())
    direct = run(src, translate=False)
    assert direct.exit_code == plain.exit_code == 0
    assert direct.output == plain.output == "counter=10 redundance=3\n"
    assert direct.trace == plain.trace


def test_not_an_actuator_trap():
    src = 'int cpu;\nint main() {\n    __aopen("reflex");\n    __aopen("rtype");\n' \
          '    __awrite_reflex("cpu");\n    __awrite_rtype("cpu", 1);\n    __spawn_server();\n' \
          '    cpu = 3;\n    __call_v("cpu");\n}\n'
    r = run(src, [cpu_sensor([1])])
    assert r.exit_code == 3


def test_integrity_failure_exit_code():
    src = "redundant int x = 4; int main() { sleep(1); print(x); }"
    probe = Runtime()
    probe.aopen("reflex")
    cells = probe.store.allocate("x", *_int_redundant()).slots
    faults = FaultScenario.scripted([(1, cells[0], 100), (1, cells[1], 200)])
    r = run(src, fault_scenario=faults)
    assert r.exit_code == 2
    assert "IntegrityFailure" in r.trace


def _int_redundant():
    from rrvars.values import Kind, TypeCode
    return TypeCode.INT, {Kind.REDUNDANT}, 3


def test_single_fault_is_masked_in_program():
    src = "redundant int x = 4; int main() { sleep(1); print(x); print(x); }"
    probe = Runtime()
    cells = probe.store.allocate("x", *_int_redundant()).slots
    r = run(src, fault_scenario=FaultScenario.scripted([(1, cells[2], 100)]))
    assert r.exit_code == 0 and r.output == "4\n4\n"
    votes = [rec[3] for rec in parse_trace(r.trace) if rec[1] == "VOTE"]
    assert votes == ["4 majority=2 dissent=1", "4 majority=3 dissent=0"]


def test_tick_budget():
    r = run("int main() { while (1) { } }", max_ticks=50)
    assert r.exit_code == 5


def test_trace_ticks_monotone_and_bounded():
    r = run((GOLDEN / "fig8.rrc").read_text(), GOLDEN / "fig8.devices", max_ticks=60)
    ticks = [rec[0] for rec in parse_trace(r.trace)]
    assert r.exit_code == 5
    assert ticks == sorted(ticks) and max(ticks) <= 60


def test_empty_main():
    r = run("int main() {}")
    assert (r.exit_code, r.trace, r.output) == (0, "", "")


def test_run_result_unpacks():
    code, trace, output = run("int main() { print(1); }")
    assert (code, trace, output) == (0, "", "1\n")


def test_frontend_error_exit_code():
    assert run("int main() { @ }").exit_code == 1
    assert run("int main() { y = 1; }").exit_code == 1


def test_recursion_is_bounded():
    r = run("int f() { f(); } int main() { f(); }")
    assert r.exit_code == 5


def test_unknown_device_at_start():
    r = run("ref_t int gps; int main() {}")
    assert r.exit_code == 1


def test_reflective_write_is_overwritten_by_next_update():
    r = run("ref_t int cpu; int main() { sleep(1); cpu = 5; print(cpu); sleep(1); print(cpu); }",
            [cpu_sensor([10, 20])])
    assert r.output == "5\n20\n"


@pytest.mark.parametrize("path", corpus_programs(), ids=lambda p: p.name)
def test_oracle_equivalence(path):
    src = path.read_text()
    original = run(src)
    translated = run(translate(src), translate=False)
    assert (original.exit_code, original.output) == (translated.exit_code, translated.output)
    assert original.trace == translated.trace


def test_interpreter_direct_use():
    program = parse(tokenize("int x; int main() { x = 6 * 7; }"))
    interp = Interpreter(program, Runtime())
    interp.run()
    assert interp.globals["x"] == 42
