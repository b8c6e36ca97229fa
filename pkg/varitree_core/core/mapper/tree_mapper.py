# Copyright 2024 The varitree-core authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
from varitree_core.core.mapper.json_files import PathLike, dump_json, load_json
from varitree_core.dtos import EdgeCurveDto, TreeDto, TreeDtoSchema
from varitree_core.model.curve import PolygonalCurve
from varitree_core.model.tree import EmbeddedTree, RootedTree


def embedded_tree_to_dto(emb: EmbeddedTree) -> TreeDto:
    return TreeDto(
        dim=emb.dim,
        root=emb.tree.root,
        parent=list(emb.tree.parent),
        positions=emb.positions.tolist(),
        edges=[
            EdgeCurveDto(from_node=parent, to_node=child, points=emb.edge_curves[(parent, child)].points.tolist())
            for parent, child in emb.tree.edges
        ],
    )


def dto_to_embedded_tree(dto: TreeDto) -> EmbeddedTree:
    """Rebuild the tree; EmbeddedTree re-checks edge set, endpoints and injectivity."""
    curves = {(edge.from_node, edge.to_node): PolygonalCurve(edge.points) for edge in dto.edges}
    return EmbeddedTree(RootedTree(tuple(dto.parent)), dto.positions, curves)


def read_tree(path: PathLike) -> EmbeddedTree:
    return dto_to_embedded_tree(load_json(path, TreeDtoSchema()))


def write_tree(emb: EmbeddedTree, path: PathLike):
    dump_json(path, TreeDtoSchema(), embedded_tree_to_dto(emb))
