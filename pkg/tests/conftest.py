import pytest
from hypothesis import settings

from asck import CorpusSpec, generate_corpus, run_corpus_checks
from asck.io import write_ccm

settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(CorpusSpec())


@pytest.fixture(scope="session")
def corpus_results(corpus, tmp_path_factory):
    """All checks over the whole corpus, computed once per session.

    Any disagreement gets its scheme dumped as a .ccm reproducer before
    the assertion in the consuming test fires.
    """
    results = run_corpus_checks(corpus, CorpusSpec().primes)
    bad = [(m, rep) for m, rep in results if not rep.agree]
    if bad:
        out = tmp_path_factory.mktemp("disagreements")
        for member, rep in bad:
            write_ccm(member.scheme.matrix,
                      out / f"{member.name}-{rep.check}-p{rep.p}.ccm")
        print(f"\nreproducers for {len(bad)} disagreements dumped to {out}")
    return results
