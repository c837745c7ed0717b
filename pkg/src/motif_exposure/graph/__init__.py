from .core import ego_network, ego_members, common_neighbor_count, triangles, four_cliques, \
    edge_common_neighbors, from_networkx, to_networkx
from .io import load_edge_list, write_edge_list, write_attributes, align_to_graph, \
    read_edge_list_text
