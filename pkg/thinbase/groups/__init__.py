from thinbase.groups.cover import class_cover_check, covered_by, is_class_union, pairwise_uncovered, product_cover_check, representations, spot_check
from thinbase.groups.finite_group import ConjugacyClass, FiniteGroup, SubsetMask, alternating_group, build_group, centralizer_order, conjugacy_classes, cyclic_group, element_orders, from_permutations, from_table, symmetric_group
from thinbase.groups.subgroups import GroupHomomorphism, NormalSubgroupLattice, find_large_subgroup, is_normal, is_subgroup, normal_subgroups, quotient, right_coset_representatives, subgroup_as_group, subgroup_closure

__all__ = [
    'ConjugacyClass',
    'FiniteGroup',
    'GroupHomomorphism',
    'NormalSubgroupLattice',
    'SubsetMask',
    'alternating_group',
    'build_group',
    'centralizer_order',
    'class_cover_check',
    'conjugacy_classes',
    'covered_by',
    'cyclic_group',
    'element_orders',
    'find_large_subgroup',
    'from_permutations',
    'from_table',
    'is_class_union',
    'is_normal',
    'is_subgroup',
    'normal_subgroups',
    'pairwise_uncovered',
    'product_cover_check',
    'quotient',
    'representations',
    'right_coset_representatives',
    'spot_check',
    'subgroup_as_group',
    'subgroup_closure',
    'symmetric_group',
]
