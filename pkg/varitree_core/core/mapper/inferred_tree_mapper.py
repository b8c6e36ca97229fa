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
from varitree_core.dtos import InferredTreeDto, InferredTreeDtoSchema, WeightedEdgeDto
from varitree_core.model.inference import InferredTree


def inferred_tree_to_dto(tree: InferredTree) -> InferredTreeDto:
    return InferredTreeDto(
        root=tree.root,
        node_ids=list(tree.node_ids),
        edges=[WeightedEdgeDto(from_node=a, to_node=b, weight=w) for a, b, w in tree.edges],
    )


def dto_to_inferred_tree(dto: InferredTreeDto) -> InferredTree:
    return InferredTree(
        node_ids=tuple(dto.node_ids),
        edges=tuple((edge.from_node, edge.to_node, edge.weight) for edge in dto.edges),
        root=dto.root,
    )


def read_inferred_tree(path: PathLike) -> InferredTree:
    return dto_to_inferred_tree(load_json(path, InferredTreeDtoSchema()))


def write_inferred_tree(tree: InferredTree, path: PathLike):
    dump_json(path, InferredTreeDtoSchema(), inferred_tree_to_dto(tree))
