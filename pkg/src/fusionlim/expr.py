"""Parsing of group and module expressions.

Group expressions::

    Sym(n) | C(n) | prod(G1, ..., Gk) | wreath(G, p) | semidirect(ModExpr, GroupExpr)

Module expressions::

    natural(p) | natural(p, n) | tensor(M1, ..., Mk) | power(M, p) | trivial(p, d)

A module expression is built against a group expression of the same shape:
``natural`` over ``Sym``, ``tensor`` over ``prod`` (factor by factor),
``power(M, p)`` over ``wreath(G, p)``; ``trivial`` fits any group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .groups import (Group, GroupError, PermGroup, cyclic_group, direct_product,
                     is_prime, semidirect_product, symmetric_group, wreath_product)
from .modules import GModule, ModuleError, bind, natural_module, power_module, tensor


class ParseError(ValueError):
    """Malformed expression or a module that does not fit its group."""


@dataclass(frozen=True)
class Node:
    head: str
    args: tuple

    def __str__(self):
        return f"{self.head}(" + ",".join(str(a) for a in self.args) + ")"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, name, punct = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        elif punct is not None and not punct.isspace():
            if punct not in "(),":
                raise ParseError(f"unexpected character {punct!r}")
            out.append((punct, punct))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "")

    def take(self, kind: str) -> str:
        k, v = self.peek()
        if k != kind:
            raise ParseError(f"expected {kind!r} but found {v or 'end of input'!r} in {self.text!r}")
        self.i += 1
        return v

    def term(self):
        k, v = self.peek()
        if k == "num":
            self.i += 1
            return int(v)
        head = self.take("name")
        self.take("(")
        args = [self.term()]
        while self.peek()[0] == ",":
            self.i += 1
            args.append(self.term())
        self.take(")")
        return Node(head, tuple(args))

    def parse(self):
        node = self.term()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input in {self.text!r}")
        return node


def parse(text: str) -> Node:
    """Parse an expression into a tree of :class:`Node`; integers stay ints."""
    node = _Parser(text).parse()
    if not isinstance(node, Node):
        raise ParseError(f"{text!r} is a number, not an expression")
    return node


_GROUP_ARITY = {"Sym": (1, 1), "C": (1, 1), "prod": (1, None), "wreath": (2, 2),
                "semidirect": (2, 2)}
_MODULE_ARITY = {"natural": (1, 2), "tensor": (1, None), "power": (2, 2), "trivial": (2, 2)}


def _check_arity(node: Node, table: dict, kind: str):
    if node.head not in table:
        raise ParseError(f"unknown {kind} constructor {node.head!r}")
    lo, hi = table[node.head]
    n = len(node.args)
    if n < lo or (hi is not None and n > hi):
        raise ParseError(f"{node.head} takes {lo}{'' if hi == lo else '+'} arguments, got {n}")


def _int_arg(node: Node, k: int, minimum: int = 1) -> int:
    a = node.args[k]
    if not isinstance(a, int):
        raise ParseError(f"argument {k + 1} of {node.head} must be an integer")
    if a < minimum:
        raise ParseError(f"argument {k + 1} of {node.head} must be >= {minimum}")
    return a


def _node_arg(node: Node, k: int) -> Node:
    a = node.args[k]
    if not isinstance(a, Node):
        raise ParseError(f"argument {k + 1} of {node.head} must be an expression")
    return a


def build_group(expr: str | Node) -> Group:
    node = parse(expr) if isinstance(expr, str) else expr
    _check_arity(node, _GROUP_ARITY, "group")
    h = node.head
    if h == "Sym":
        return symmetric_group(_int_arg(node, 0))
    if h == "C":
        return cyclic_group(_int_arg(node, 0))
    if h == "prod":
        parts = [build_group(_node_arg(node, k)) for k in range(len(node.args))]
        if not all(isinstance(g, PermGroup) for g in parts):
            raise ParseError("prod() factors must be permutation groups")
        return direct_product(*parts)
    if h == "wreath":
        G = build_group(_node_arg(node, 0))
        if not isinstance(G, PermGroup):
            raise ParseError("wreath() needs a permutation group")
        return wreath_product(G, _int_arg(node, 1))
    # semidirect(ModExpr, GroupExpr)
    Gam = build_group(_node_arg(node, 1))
    if not isinstance(Gam, PermGroup):
        raise ParseError("the acting group of semidirect() must be a permutation group")
    M = build_module(_node_arg(node, 0), Gam)
    return semidirect_product(M)


def module_prime(expr: str | Node) -> int:
    """The prime a module expression is defined over."""
    node = parse(expr) if isinstance(expr, str) else expr
    _check_arity(node, _MODULE_ARITY, "module")
    if node.head in ("natural", "trivial"):
        p = _int_arg(node, 0, minimum=2)
        if not is_prime(p):
            raise ParseError(f"{p} is not prime")
        return p
    primes = {module_prime(_node_arg(node, k)) for k in range(len(node.args))
              if isinstance(node.args[k], Node)}
    if len(primes) != 1:
        raise ParseError(f"mixed primes in {node}")
    return primes.pop()


def build_module(expr: str | Node, group: Group) -> GModule:
    """Build a module expression over ``group``, matching the group's shape."""
    node = parse(expr) if isinstance(expr, str) else expr
    _check_arity(node, _MODULE_ARITY, "module")
    p = module_prime(node)
    h = node.head
    try:
        if h == "trivial":
            return GModule.trivial(group, p, _int_arg(node, 1))
        if h == "natural":
            n = _int_arg(node, 1, minimum=2) if len(node.args) == 2 else p + 1
            if not (isinstance(group, PermGroup) and group.name == f"Sym({n})"):
                raise ParseError(f"{node} needs the group Sym({n}), got {group.name}")
            return natural_module(p, degree=n, group=group)
        if h == "tensor":
            factors = getattr(group, "factors", None)
            if factors is None or len(factors) != len(node.args):
                raise ParseError(f"{node} needs a prod() of {len(node.args)} groups, got {group.name}")
            parts = [build_module(_node_arg(node, k), f) for k, f in enumerate(factors)]
            return bind(tensor(*parts), group)
        # power(M, q)
        q = _int_arg(node, 1)
        base = getattr(group, "base", None)
        if base is None or group.copies != q:
            raise ParseError(f"{node} needs wreath(G,{q}), got {group.name}")
        return bind(power_module(build_module(_node_arg(node, 0), base), q), group)
    except (ModuleError, GroupError) as e:
        raise ParseError(str(e)) from e
