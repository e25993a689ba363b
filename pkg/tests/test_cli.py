import io
from collections import Counter

import pytest

from flp.cli import Options, Repl, main
from flp.syntax import read_resource


@pytest.fixture
def corpus_dir(tmp_path):
    for name in ("coin.flp", "toy_tests.flp", "number.flp", "grammar.flp"):
        (tmp_path / name).write_text(read_resource(name))
    return tmp_path


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(map(str, argv)), out, err)
    return code, out.getvalue().splitlines(), err.getvalue()


class TestRunFile:
    def test_example(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "coin.flp", "-e", "rt(f(coin))")
        assert code == 0 and lines[-1] == "no more answers."
        assert len(set(lines[:-1])) == 8

    def test_test2_golden(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "toy_tests.flp", "test2")
        assert code == 0
        assert Counter(lines[:-1]) == Counter(["0", "1", "1", "2"])
        assert lines == ["0", "1", "1", "2", "no more answers."]

    def test_palindromes(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "grammar.flp", "palindrome", "--max-answers", "5",
                             "--max-steps", "60")
        words = ["" if w == "[]" else w.strip('"') for w in lines[:-1]]
        assert code == 0 and len(words) == 5
        assert all(w == w[::-1] for w in words)
        assert lines[-1] == "search bound reached."

    @pytest.mark.parametrize("engine", ["pop", "let"])
    def test_calculus_engines(self, corpus_dir, engine):
        code, lines, _ = run(corpus_dir / "toy_tests.flp", "test1", "--engine", engine)
        assert code == 0 and lines == ["0", "2", "no more answers."]

    def test_rrt_flag(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "coin.flp", "f(coin)", "--rrt")
        assert code == 0 and len(set(lines[:-1])) == 16

    def test_bundled_name(self):
        code, lines, _ = run("coin.flp", "f(coin)")
        assert code == 0 and len(lines) == 5

    def test_no_answers(self, tmp_path):
        f = tmp_path / "h.flp"
        f.write_text("h(0) -> 0\n")
        code, lines, _ = run(f, "h(1)")
        assert code == 1 and lines == ["no more answers."]

    def test_parse_error(self, tmp_path):
        f = tmp_path / "bad.flp"
        f.write_text("coin -> (0\n")
        code, lines, err = run(f, "coin")
        assert code == 2 and lines == [] and "bad.flp:1:" in err

    def test_bad_goal(self, corpus_dir):
        code, _, err = run(corpus_dir / "coin.flp", "-e", "f(X)")
        assert code == 2 and "free variable" in err

    def test_missing_file(self, tmp_path):
        code, _, err = run(tmp_path / "none.flp", "coin")
        assert code == 2 and err

    def test_bad_bound(self, corpus_dir):
        code, _, err = run(corpus_dir / "coin.flp", "coin", "--max-steps", "0")
        assert code == 2 and "positive" in err

    def test_trace_let(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "coin.flp", "-e", "rt(f(coin))", "--engine", "let", "--trace")
        assert code == 0
        assert lines[0] == "0. f^rt(coin^rt)" and lines[1] == "1. [Fapp@ε] g(coin^rt, coin)"

    def test_trace_susp(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "toy_tests.flp", "test1", "--trace")
        assert code == 0 and lines[1].startswith("  % test1#")

    def test_compare(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "toy_tests.flp", "test1", "--compare")
        assert code == 0 and lines[-1] == "PASS"

    def test_compare_diff(self, corpus_dir):
        code, lines, _ = run(corpus_dir / "number.flp", "ctnumber(1)", "--compare", "--max-steps", "6")
        assert code == 1 and lines[-1].startswith("DIFF")

    def test_dot(self, corpus_dir, tmp_path):
        path = tmp_path / "g.dot"
        code, _, _ = run(corpus_dir / "coin.flp", "f(coin)", "--dot", path, "--max-steps", "6")
        assert code == 0 and path.read_text().startswith("digraph let {")

    def test_dot_pop(self, corpus_dir, tmp_path):
        path = tmp_path / "g.dot"
        run(corpus_dir / "coin.flp", "f(coin)", "--engine", "pop", "--dot", path, "--max-steps", "6")
        assert path.read_text().startswith("digraph pop {")

    def test_deterministic(self, corpus_dir):
        assert run(corpus_dir / "coin.flp", "rt(f(coin))") == run(corpus_dir / "coin.flp", "rt(f(coin))")


def session(lines, program=None):
    out, err = io.StringIO(), io.StringIO()
    repl = Repl(Options(), program, out, err)
    repl.run(lines)
    return repl, out.getvalue().splitlines(), err.getvalue()


class TestRepl:
    def test_trace_session(self, corpus_dir):
        _, lines, err = session([f":load {corpus_dir / 'coin.flp'}", ":engine let", ":trace on",
                                 "f^rt(coin^rt)", ":quit"])
        assert not err
        assert lines[1] == "0. f^rt(coin^rt)"
        assert lines[2] == "1. [Fapp@ε] g(coin^rt, coin)"
        assert lines[3] == "2. [LetIn@ε] let X = coin in g(coin^rt, X)"
        assert lines[-1] == "no more answers."

    def test_number(self):
        _, lines, _ = session([":load number.flp", "number(3)"])
        assert len(lines) == 1 + 27 + 1

    def test_quit_stops(self):
        _, lines, _ = session([":quit", "0"])
        assert lines == []

    def test_errors_recover(self):
        repl, lines, err = session([":engine fast", ":trace maybe", ":bounds steps=x", ":nope",
                                    ":load /no/such.flp", "unknown(0)", "0"])
        assert err.count("error:") == 6
        assert lines[-2:] == ["0", "no more answers."]

    def test_bounds(self):
        repl, lines, _ = session([":bounds steps=7 states=50 answers=2"])
        assert (repl.opts.max_steps, repl.opts.max_states, repl.opts.max_answers) == (7, 50, 2)
        assert lines == ["steps=7 states=50 answers=2"]

    def test_answer_bound(self):
        _, lines, _ = session([":load number.flp", ":bounds answers=4", "number(3)"])
        assert lines[-1] == "search bound reached." and len(lines) == 1 + 1 + 4 + 1

    def test_compare_command(self):
        _, lines, _ = session([":load toy_tests.flp", ":compare test1"])
        assert lines[-1] == "PASS"

    def test_comments_and_blank_lines(self):
        _, lines, err = session(["", "% nothing", "0"])
        assert not err and lines == ["0", "no more answers."]

    def test_loop_reads_stream(self):
        out, err = io.StringIO(), io.StringIO()
        Repl(Options(), None, out, err).loop(io.StringIO("1\n:quit\n2\n"))
        assert out.getvalue().splitlines() == ["1", "no more answers."]
