"""Per-criterion pass/fail report for the acceptance suite."""
from collections import OrderedDict

_RESULTS = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "seconds": 0.0, "parts": []})
    ok = call.excinfo is None
    entry["ok"] &= ok
    entry["seconds"] += call.duration
    entry["parts"].append((item.name, ok))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        e = _RESULTS[number]
        status = "PASS" if e["ok"] else "FAIL"
        line = f"criterion {number:>2}: {status}  {e['title']}  ({e['seconds']:.1f} s)"
        if len(e["parts"]) > 1:
            line += "  [" + ", ".join(f"{n}: {'pass' if ok else 'fail'}" for n, ok in e["parts"]) + "]"
        terminalreporter.write_line(line)
