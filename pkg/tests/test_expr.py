import pytest

from yangflag.expr import BinOp, ExpressionError, Inv, Minor, Num, Plucker, evaluate_text, parse_expression
from yangflag.minor_calculus import quasi_plucker_minor, ydet
from yangflag.series_ring import gen_series, invert, shift


def test_parse_shapes():
    node = parse_expression("t[1,2;1,3](u+1) - 2*p[2,3;1](u)")
    assert isinstance(node, BinOp) and node.op == "-"
    assert node.left == Minor((1, 2), (1, 3), 1, 0)
    assert node.right.left == Num(2)
    assert isinstance(node.right.right, Plucker) and node.right.right.M == (1,)
    assert isinstance(parse_expression("inv(t[1;1](u-2))"), Inv)
    assert parse_expression("p[1,2;](u)").M == ()


def test_precedence():
    a = evaluate_text("1 + t[1;2](u) * 2", 2, 2)
    b = evaluate_text("(1 + t[1;2](u)) * 2", 2, 2)
    assert a[0] == 1 and b[0] == 2


def test_quasi_plucker_by_hand():
    got = evaluate_text("inv(t[1;1](u)) * t[1;2](u)", 2, 3)
    assert got.equals(quasi_plucker_minor(1, 2, (), 2, 3))
    assert got.equals(evaluate_text("p[1,2;](u)", 2, 3))


def test_minor_is_taken_as_written():
    # t[2,1;1,2] is the raw row-ordered expansion, equal to -t[1,2;1,2]
    assert evaluate_text("t[2,1;1,2](u)", 2, 3).equals(-ydet(2, (1, 2), (1, 2), 3))
    assert evaluate_text("t[1;2](u+3)", 2, 3).equals(shift(gen_series(2, 1, 2, 3), 3))


def test_inverse_of_quantum_determinant():
    got = evaluate_text("inv(t[1,2;1,2](u)) * t[1,2;1,2](u)", 2, 3)
    assert got.equals(invert(ydet(2, (1, 2), (1, 2), 3)) * ydet(2, (1, 2), (1, 2), 3))
    assert got[0] == 1 and all(not got[k] for k in (1, 2, 3))


@pytest.mark.parametrize("text,col,fragment", [
    ("t[1,2;1](u)", 1, "size mismatch"),
    ("t[1;1](u) $ 2", 11, "unexpected character"),
    ("t[1;1](u", 9, "end of input"),
    ("inv(t[1;2](u))", 1, "inv:"),
    ("t[1;3](u)", 1, "out of range"),
    ("p[1,2;1](u)", 1, "outside M"),
    ("inv(0)", 1, "inverse of zero"),
    ("t[1;1](v)", 8, "unexpected character 'v'"),
    ("t[1;1](1)", 8, "expected 'u'"),
])
def test_errors_carry_column(text, col, fragment):
    with pytest.raises(ExpressionError) as exc:
        evaluate_text(text, 2, 2)
    assert exc.value.pos + 1 == col
    assert fragment in str(exc.value)
