import pytest

from RHSActions.errors import ElaborationError, GroupSpecSyntaxError
from RHSActions.group_spec import GroupSpecNode, build_group, normalize, parse_group_spec
from RHSActions.groups import is_isomorphic
from RHSActions.structure import classify_2group


@pytest.mark.parametrize(
    "text, canonical",
    [
        ("quot(Q(16), Z)", "quot(Q(16), Z)"),
        ("quot( Q(8) x C(3) ,Z(2) )", "quot(Q(8) x C(3), Z(2))"),
        ("perm[(0 1 2); (0 1)]", "perm[(0 1 2); (0 1)]"),
        ("perm[(0,1,2);(0 1)]", "perm[(0 1 2); (0 1)]"),
        ("Q(16,3,1)", "Q(16,3,1)"),
        ("O(48,5,1)", "O(48,5,1)"),
        ("SL(2,5)", "SL(2,5)"),
        ("BT x C(5)", "BT x C(5)"),
        ("C(2)xC(3)", "C(2) x C(3)"),
    ],
)
def test_normalize(text, canonical):
    node = parse_group_spec(text)
    assert normalize(node) == canonical
    assert parse_group_spec(canonical) == node


def test_products_are_flattened():
    node = parse_group_spec("C(2) x C(3) x D(6)")
    assert node.kind == "product"
    assert [child.kind for child in node.children] == ["cyclic", "cyclic", "dihedral"]
    assert node.children[2] == GroupSpecNode("dihedral", (6,))


def test_syntax_error_offset():
    with pytest.raises(GroupSpecSyntaxError) as info:
        parse_group_spec("C(2) + C(3)")
    assert info.value.offset == 5


@pytest.mark.parametrize("text", ["C(2) x", "C()", "Q(8,3)", "quot(C(4))", "SL(3,5)", ""])
def test_syntax_errors(text):
    with pytest.raises(GroupSpecSyntaxError):
        parse_group_spec(text)


@pytest.mark.parametrize(
    "text, path",
    [
        ("D(7)", "spec/dihedral"),
        ("Q(6)", "spec/quaternion"),
        ("Q(16,3,3)", "spec/quaternion"),
        ("Q(12,5,1)", "spec/quaternion"),
        ("SL(2,9)", "spec/special_linear"),
        ("C(3) x O(48,3,1)", "spec/product[1]/octahedral"),
        ("quot(C(2) x C(2), Z)", "spec/quot"),
        ("quot(Q(8), Z(4))", "spec/quot"),
    ],
)
def test_elaboration_errors(text, path):
    with pytest.raises(ElaborationError) as info:
        build_group(text)
    assert info.value.path == path
    assert not info.value.budget


def test_elaboration_budget_errors():
    with pytest.raises(ElaborationError) as info:
        build_group("C(2) x C(30000)")
    assert info.value.path == "spec/product[1]/cyclic"
    assert info.value.budget
    with pytest.raises(ElaborationError) as info:
        build_group("C(100) x C(300)")
    assert info.value.path == "spec/product"
    assert info.value.budget


def test_central_quotients():
    G = build_group("quot(Q(16), Z)")
    assert G.order == 8
    assert classify_2group(G).tag == "dihedral"
    assert is_isomorphic(G, build_group("D(8)"))[0]
    assert build_group("quot(Q(8) x C(3), Z(2))").order == 12
    assert build_group("quot(Q(8) x C(3), Z)").order == 4


def test_elaborated_groups_carry_their_canonical_text():
    G = build_group("Q(8)x C(3)")
    assert G.origin == "Q(8) x C(3)"
    assert G.order == 24


def test_permutation_groups():
    S3 = build_group("perm[(0 1 2); (0 1)]")
    assert S3.order == 6
    assert is_isomorphic(S3, build_group("D(6)"))[0]
    assert build_group("perm[(0 1 2 3 4)]").order == 5
