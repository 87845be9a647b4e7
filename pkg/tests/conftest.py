from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


ACCEPTANCE_LINES: list[str] = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    status = "PASS" if call.excinfo is None else "FAIL"
    label = marker.args[0]
    line = f"[{status}] criterion {label}"
    if call.excinfo is not None:
        line += f": {call.excinfo.typename}: {str(call.excinfo.value).splitlines()[0][:160]}"
    ACCEPTANCE_LINES.append(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test certifies")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
