import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "fdwave", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fdwave"))



def pytest_configure(config):
    # criterion number -> (description, passed, detail), filled by test_acceptance.py
    config.fdwave_acceptance = {}


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "fdwave_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(results):
        desc, ok, detail = results[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {cid:>2}  {desc}  ({detail})")
