import pytest

from fusionlim.expr import ParseError, build_group, build_module, module_prime, parse


def test_parse_tree():
    n = parse("wreath(Sym(3), 2)")
    assert n.head == "wreath"
    assert n.args[0].head == "Sym" and list(n.args[0].args) == [3]
    assert n.args[1] == 2


@pytest.mark.parametrize("text,order", [
    ("Sym(3)", 6), ("C(5)", 5), ("prod(Sym(3),C(2))", 12), ("wreath(Sym(3),2)", 72),
    ("wreath(wreath(Sym(3),2),2)", 10368), ("semidirect(natural(2), Sym(3))", 24),
])
def test_group_orders(text, order):
    assert build_group(text).order == order


@pytest.mark.parametrize("group,module,dim", [
    ("Sym(3)", "natural(2)", 2),
    ("Sym(4)", "natural(3)", 3),
    ("Sym(4)", "natural(2,4)", 3),
    ("prod(Sym(3),Sym(3))", "tensor(natural(2),natural(2))", 4),
    ("wreath(Sym(3),2)", "power(natural(2),2)", 4),
    ("wreath(wreath(Sym(3),2),2)", "power(power(natural(2),2),2)", 8),
    ("C(3)", "trivial(2,1)", 1),
])
def test_module_dims(group, module, dim):
    G = build_group(group)
    M = build_module(module, G)
    assert M.dim == dim and M.group is G


def test_module_prime():
    assert module_prime("tensor(natural(3),trivial(3,1))") == 3
    with pytest.raises(ParseError):
        module_prime("tensor(natural(2),natural(3))")
    with pytest.raises(ParseError):
        module_prime("natural(4)")


@pytest.mark.parametrize("text", ["Sym(", "Sym(3))", "Foo(3)", "Sym(x)", "", "Sym(3,4)",
                                  "wreath(Sym(3))", "prod()", "Sym(0)"])
def test_malformed_groups(text):
    with pytest.raises(ParseError):
        build_group(text)


@pytest.mark.parametrize("group,module", [
    ("Sym(4)", "natural(2)"),
    ("Sym(3)", "tensor(natural(2),natural(2))"),
    ("wreath(Sym(3),2)", "power(natural(2),3)"),
    ("Sym(3)", "bogus(2)"),
])
def test_mismatched_modules(group, module):
    with pytest.raises(ParseError):
        build_module(module, build_group(group))
