"""Shared pass/fail log for the acceptance criteria (printed in the terminal summary)."""

from contextlib import contextmanager

RESULTS = []


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException as exc:
        detail = " ".join(str(exc).split())[:300]
        RESULTS.append(("FAIL", name, detail))
        print(f"FAIL {name} -- {detail}")
        raise
    else:
        RESULTS.append(("PASS", name, ""))
        print(f"PASS {name}")
