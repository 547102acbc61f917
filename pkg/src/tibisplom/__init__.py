"""Tiled binned scatterplot matrices for chromatin segmentation data."""

from .binning import (
    BinGrid,
    FilterState,
    HistGrid,
    Scaling,
    ViewState,
    alpha_global,
    alpha_local,
    apply_filter,
    bin_index,
    compute_histogram_bins,
    compute_scatter_bins,
    compute_splom_bins,
    filter_mask,
)
from .model import (
    ATTRIBUTES,
    MIN_SEGMENT_LENGTH,
    AttributeId,
    CategoryMode,
    CellType,
    Dataset,
    Modification,
    Segment,
    attribute_value,
    esc_code,
    length_category,
    normalize_for_filter,
    read_dataset_tsv,
    write_dataset_tsv,
)
from .render import (
    Document,
    SplomLayout,
    document_to_svg,
    export,
    rasterize,
    render_histogram_cell,
    render_scatter_cell,
    render_splom,
)
from .segdata import (
    Chromosome,
    Region,
    build_dataset,
    coverage_fraction,
    cpg_density,
    es_segmentation,
    parse_fasta,
    parse_region_file,
)
from .style import (
    TileStyle,
    code_tile,
    composite_on_white,
    length_tile,
)

__version__ = "0.1.0"
