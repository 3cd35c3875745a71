import math

import pytest
from hypothesis import given, settings, strategies as st

from helpers import programs
from qisa import corpus
from qisa.errors import ElaborationError, LexError, ParseError
from qisa.lang import ast, elaborate, parse, pretty_print, tokenize
from qisa.lang.elaborate import DifInstr, EntInstr, PhaInstr

SHOR = corpus.source("shor_9_4")


def kinds(source):
    return [t.kind for t in tokenize(source)[:-1]]


def build(source, base_dir=None):
    return elaborate(parse(source), base_dir=base_dir)


# tokenizer


def test_tokenize_simple_instruction():
    assert kinds("INI R1") == ["keyword", "identifier"]


def test_tokenize_pha_line():
    toks = tokenize("PHA R2, PI, 1")[:-1]
    assert [t.lexeme for t in toks] == ["PHA", "R2", ",", "PI", ",", "1"]
    assert [t.column for t in toks] == [1, 5, 7, 9, 11, 13]


def test_tokenize_positions_and_comments():
    toks = tokenize("; header\nREG A 2  ; width\n  INI A\n")
    assert [(t.lexeme, t.line, t.column) for t in toks[:-1]] == [
        ("REG", 2, 1), ("A", 2, 5), ("2", 2, 7), ("INI", 3, 3), ("A", 3, 7),
    ]
    assert toks[-1].kind == "eof"


def test_tokenize_literals():
    assert kinds('1.5 2e3 7 "x.tbl"') == ["float", "float", "integer", "string"]


def test_keywords_are_case_sensitive():
    assert kinds("ini Ini INI") == ["identifier", "identifier", "keyword"]


@pytest.mark.parametrize("source, line, col", [("@", 1, 1), ("INI R1\n  #", 2, 3), ('ANN "abc', 1, 5)])
def test_lex_errors(source, line, col):
    with pytest.raises(LexError) as info:
        tokenize(source)
    assert (info.value.line, info.value.column) == (line, col)


# parser


def test_parse_shor_program():
    prog = parse(SHOR)
    assert prog.declarations == [ast.RegDecl("R1", 7), ast.RegDecl("R2", 4)]
    assert len(prog.body) == 7
    assert prog.body[3] == ast.Ent("R1", "R2", ast.ModExpSpec(ast.IntLit(4), ast.IntLit(9)))


def test_parse_repeat_block():
    prog = parse("REG D 6\nREPEAT GROVER_ITERS(DIM(D)) {\n PHA D, PI, 42\n DIF D, 64\n}\n")
    (loop,) = prog.body
    assert loop.count == ast.GroverIters(ast.DimOf("D"))
    assert loop.body == (ast.Pha("D", ast.PiPhase(), ast.IntLit(42)), ast.Dif("D", ast.IntLit(64)))


def test_parse_phase_forms():
    prog = parse("PHA A, PI*3/4, 0\nPHA A, 0.25, 1\nPHA A, 2, 1")
    assert [s.phase for s in prog.body] == [ast.PiFraction(3, 4), ast.FloatPhase(0.25), ast.FloatPhase(2.0)]


def test_parse_precedence_and_parens():
    e = parse("DIF A, 1 + 2 * 3").body[0].size
    assert e == ast.BinOp("+", ast.IntLit(1), ast.BinOp("*", ast.IntLit(2), ast.IntLit(3)))
    e = parse("DIF A, (1 + 2) * 3").body[0].size
    assert e == ast.BinOp("*", ast.BinOp("+", ast.IntLit(1), ast.IntLit(2)), ast.IntLit(3))
    e = parse("DIF A, 8 - 2 - 1").body[0].size
    assert e == ast.BinOp("-", ast.BinOp("-", ast.IntLit(8), ast.IntLit(2)), ast.IntLit(1))


def test_parse_records_positions():
    stmt = parse("REG A 1\n\n   INI A").body[0]
    assert stmt.pos == (3, 4)


@pytest.mark.parametrize("source, line, col", [
    ("DIF R2", 1, 7),
    ("INI", 1, 4),
    ("REG 3 A", 1, 5),
    ("ENT A, B, SQUARE(2)", 1, 11),
    ("REPEAT 2 { INI A", 1, 17),
    ("INI A }", 1, 7),
    ("PHA A, PI*1, 0", 1, 12),
    ("ANN model", 1, 5),
])
def test_parse_errors(source, line, col):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert (info.value.line, info.value.column) == (line, col)


@pytest.mark.parametrize("word", ["IF", "JMP", "CALL", "GOTO", "WHILE"])
def test_control_flow_words_are_rejected(word):
    with pytest.raises(ParseError):
        parse(f"REG A 1\nINI A\n{word} A\nREA A\n")


@settings(max_examples=200, deadline=None)
@given(
    word=st.sampled_from(["IF", "JMP", "CALL", "if", "jmp", "call"]),
    operands=st.lists(st.sampled_from(["R1", "R2", "0", "1", ",", "(", ")", "{", "}", "LABEL", "INI"]), max_size=5),
    where=st.integers(0, 9),
)
def test_control_flow_fuzz(word, operands, where):
    lines = SHOR.splitlines()
    lines.insert(where, " ".join([word, *operands]))
    with pytest.raises(ParseError):
        parse("\n".join(lines))


# pretty printer


def test_print_shor_round_trip():
    prog = parse(SHOR)
    text = pretty_print(prog)
    assert "ENT R1, R2, MODEXP(4, 9)" in text
    assert parse(text) == prog
    assert pretty_print(parse(text)) == text


def test_print_nested_repeat_indentation():
    text = pretty_print(parse("REPEAT 2 { REPEAT 3 { QFT A } INI A }"))
    assert text == "REPEAT 2 {\n    REPEAT 3 {\n        QFT A\n    }\n    INI A\n}\n"


def test_print_parenthesizes_where_needed():
    text = pretty_print(parse("DIF A, (1 + 2) * (3 - (4 - 5))\nDIF A, 1 + 2 * 3"))
    assert text == "DIF A, (1 + 2) * (3 - (4 - 5))\nDIF A, 1 + 2 * 3\n"


def test_print_phases():
    assert pretty_print(parse("PHA A, PI*1/8, 0\nPHA A, 1e-07, 0")) == "PHA A, PI*1/8, 0\nPHA A, 1e-07, 0\n"


@settings(max_examples=300, deadline=None)
@given(prog=programs)
def test_generated_trees_round_trip(prog):
    text = pretty_print(prog)
    assert parse(text) == prog
    assert pretty_print(parse(text)) == text


# elaborator


def test_elaborate_grover_counts(corpus_program):
    prog = corpus_program("grover_64")
    body = prog.instructions[3:-2]
    assert len(body) == 12
    assert body[0] == PhaInstr(1, math.pi, 42) and body[1] == DifInstr(1, 64)


def test_elaborate_intrinsics():
    prog = build("REG A 6\nREPEAT ISQRT(DIM(A)) { QFT A }\nREPEAT GROVER_ITERS(64) { INI A }")
    assert len(prog) == 8 + 6
    assert build("REG A 2\nREPEAT GROVER_ITERS(1) { QFT A }").instructions == ()


def test_elaborate_modexp_table(corpus_program):
    ent = corpus_program("shor_9_4").instructions[3]
    assert isinstance(ent, EntInstr) and ent.label == "MODEXP(4, 9)"
    assert ent.table[:6].tolist() == [1, 4, 7, 1, 4, 7]
    assert len(ent.table) == 128


def test_elaborate_table_paths_are_relative_to_source(tmp_path):
    (tmp_path / "f.tbl").write_text("0,1\n1,0\n")
    prog = build('REG A 1\nREG B 1\nENT A, B, TABLE("f.tbl")', base_dir=str(tmp_path))
    assert prog.instructions[0].table.tolist() == [1, 0]


@pytest.mark.parametrize("source, fragment", [
    ("REG A 2\nDIF A, 8", "DIF size 8"),
    ("REG A 2\nREG A 3", "declared twice"),
    ("INI A\nREG A 2", "before declaration"),
    ("REG A 25", "width 25"),
    ("REG A 0", "width 0"),
    ("REG A 20\nREG B 7", "total register width 27"),
    ("REG A 2\nPHA A, PI, 4", "PHA index 4"),
    ("REG A 2\nPHA A, PI*1/0, 0", "q = 0"),
    ("REG A 2\nREG B 3\nENT A, B, MODEXP(2, 9)", "modulus 9"),
    ("REG A 2\nREG B 3\nENT A, B, MODEXP(0, 6)", "base must be positive"),
    ("REG A 2\nENT A, A, MODEXP(2, 3)", "distinct"),
    ("REG A 2\nREPEAT 1 - 2 { INI A }", "negative"),
    ("REG A 2\nREPEAT ISQRT(1 - 2) { INI A }", "ISQRT"),
    ('REG A 2\nANN "no-such-file.ising"', "cannot load"),
])
def test_elaboration_errors(source, fragment):
    with pytest.raises(ElaborationError, match=fragment):
        build(source)


@pytest.mark.parametrize("table, fragment", [
    ("0,0\n1,1\n2,0\n", "undefined for input 3"),
    ("0,0\n1,1\n2,0\n3,1\n4,0\n", "outside 0..3"),
    ("0,0\n1,1\n2,2\n3,1\n", "does not fit"),
])
def test_table_static_checks(tmp_path, table, fragment):
    (tmp_path / "t.tbl").write_text(table)
    with pytest.raises(ElaborationError, match=fragment):
        build('REG A 2\nREG B 1\nENT A, B, TABLE("t.tbl")', base_dir=str(tmp_path))


def test_unroll_cap():
    with pytest.raises(ElaborationError, match="more than"):
        build("REG A 1\nREPEAT 1000 { REPEAT 1001 { QFT A } }")
    with pytest.raises(ElaborationError, match="more than"):
        elaborate(parse("REG A 1\nREPEAT 11 { QFT A }"), max_instructions=10)
