import selftest


def test_selftest_passes_and_ignores_worker_count():
    serial = selftest.run_selftest(42, workers=1)
    threaded = selftest.run_selftest(42, workers=4)
    assert serial.ok, serial.format_text()
    assert [r.name for r in serial.results] == [name for name, _ in selftest.CHECKS]
    assert serial.to_json() == threaded.to_json()
    assert serial.format_text() == threaded.format_text()


def test_errors_become_failed_checks(monkeypatch):
    from errors import ContractError

    def broken(rng):
        raise ContractError("boom", "demo")

    monkeypatch.setattr(selftest, "CHECKS", [("broken", broken)])
    report = selftest.run_selftest(0, workers=1)
    assert not report.ok
    assert report.results[0].detail == "ContractError (demo): boom"
    assert report.format_text().endswith("0/1 checks passed\n")
