import json
from pathlib import Path

import pandas as pd

from motif_exposure.etc.errors import ArtifactNotFoundException
from motif_exposure.model.tree import ExposureTree, TreeNode


def write_tree_json(tree: ExposureTree, path: str | Path):
    with open(path, 'w', encoding='utf-8') as file:
        json.dump(tree.to_dict(), file, indent=2, sort_keys=True)


def read_tree_json(path: str | Path) -> ExposureTree:
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFoundException(f'Tree file not found at {path}')

    with open(path, 'r', encoding='utf-8') as file:
        return ExposureTree.from_dict(json.load(file))


def _leaf_text(node: TreeNode) -> str:
    if node.estimate is None:
        return f'{node.label}\\nn={node.n_est}'

    return f'{node.label}\\n{node.estimate.point:.3f} ± {node.estimate.se:.3f}\\nn={node.n_est}'


def to_dot(tree: ExposureTree) -> str:
    """
    Graphviz rendering, one DOT node per tree node. Edges carry "≤ θ" and
    "> θ", leaves carry their estimate.
    """
    codes = tree.schema.codes
    lines = ['digraph exposure_tree {', '  node [shape=box, fontname="Helvetica"];']

    def visit(node: TreeNode, name: str):
        if node.is_leaf:
            lines.append(f'  {name} [label="{_leaf_text(node)}", style=rounded];')
            return

        lines.append(f'  {name} [label="{codes[node.dim]}\\nn={node.n_train}"];')
        visit(node.left, f'{name}L')
        visit(node.right, f'{name}R')
        lines.append(f'  {name} -> {name}L [label="≤ {node.theta:.4f}"];')
        lines.append(f'  {name} -> {name}R [label="> {node.theta:.4f}"];')

    visit(tree.root, 'R')
    lines.append('}')

    return '\n'.join(lines) + '\n'


def write_tree_dot(tree: ExposureTree, path: str | Path):
    with open(path, 'w', encoding='utf-8') as file:
        file.write(to_dot(tree))


def render_ascii(tree: ExposureTree) -> str:
    """
    Indented text rendering, one line per node.
    """
    codes = tree.schema.codes
    lines = []

    def visit(node: TreeNode, prefix: str, sign: str):
        if node.is_leaf:
            estimate = node.estimate
            value = f', mu={estimate.point:.4f}, se={estimate.se:.4f}' if estimate else ''
            lines.append(f'{prefix}{sign}({node.label}) leaf, n_est={node.n_est}{value}')
            return

        lines.append(
            f'{prefix}{sign}({node.label}) split {codes[node.dim]} at {node.theta:.4f}, '
            f'n_train={node.n_train}'
        )
        visit(node.left, prefix + '    ', '<= ')
        visit(node.right, prefix + '    ', '>  ')

    visit(tree.root, '', '')

    return '\n'.join(lines)


def _bounds(leaf: TreeNode, codes: list[str]) -> list[str]:
    parts = []
    for code, low, high, closed in zip(codes, leaf.box.lows, leaf.box.highs, leaf.box.closed):
        if low > 0 or not closed:
            parts.append(f'{code} > {low:.4f}')
        if high < 1:
            parts.append(f'{code} <= {high:.4f}')

    return parts


def leaf_table(tree: ExposureTree) -> pd.DataFrame:
    """
    One row per leaf with its bounds and estimate, sorted by the estimate, largest first.
    """
    rows = []
    for leaf in tree.leaves():
        estimate = leaf.estimate
        rows.append({
            'leaf': leaf.label,
            'mu': estimate.point if estimate else None,
            'se': estimate.se if estimate else None,
            'n_train': leaf.n_train,
            'n_est': leaf.n_est,
            'positivity_ok': estimate.positivity.ok if estimate and estimate.positivity else None,
            'condition': ' & '.join(_bounds(leaf, tree.schema.codes)) or 'everything',
        })

    frame = pd.DataFrame(rows, columns=['leaf', 'mu', 'se', 'n_train', 'n_est',
                                        'positivity_ok', 'condition'])

    return frame.sort_values('mu', ascending=False, kind='stable').reset_index(drop=True)
