//! Deterministic SVG rendering of two-dimensional lattice decompositions:
//! nodes are embedded at barycentric positions α/k in an equilateral
//! triangle and colored by their owner piece, with a legend.

use latticefem::decomp::LatticeDecomposition;

const PALETTE: [&str; 10] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn render_decomposition(d: &LatticeDecomposition) -> String {
    assert_eq!(d.n(), 2, "SVG rendering draws triangles");
    let k = d.k() as f64;
    // equilateral triangle, y axis pointing down
    let vertices = [
        (60.0, 440.0),
        (460.0, 440.0),
        (260.0, 440.0 - 400.0 * 3f64.sqrt() / 2.0),
    ];
    let position = |alpha: &[u32]| -> (f64, f64) {
        let mut x = 0.0;
        let mut y = 0.0;
        for (i, &a) in alpha.iter().enumerate() {
            let w = a as f64 / k;
            x += w * vertices[i].0;
            y += w * vertices[i].1;
        }
        (x, y)
    };

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 760 480\" font-family=\"monospace\" font-size=\"13\">\n",
    );
    svg.push_str("<rect width=\"760\" height=\"480\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n",
        vertices[0].0, vertices[0].1, vertices[1].0, vertices[1].1, vertices[2].0, vertices[2].1
    ));
    // legend + nodes, both in canonical piece order
    let mut legend_y = 30.0;
    for (index, piece) in d.pieces().iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let class = match piece.face.dim() {
            0 => "vertex",
            2 => "interior",
            _ => "edge",
        };
        svg.push_str(&format!(
            "<rect x=\"500\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n",
            legend_y - 10.0
        ));
        svg.push_str(&format!(
            "<text x=\"520\" y=\"{legend_y:.2}\">f{:?} {class} ({} nodes)</text>\n",
            piece.face.indices(),
            piece.nodes.len()
        ));
        legend_y += 22.0;
        for node in piece.nodes.iter() {
            let (x, y) = position(node.entries());
            svg.push_str(&format!(
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"6\" fill=\"{color}\" stroke=\"#333333\" stroke-width=\"0.8\"/>\n"
            ));
        }
    }
    svg.push_str(&format!(
        "<text x=\"60\" y=\"22\">degree {} lattice, {} nodes</text>\n",
        d.k(),
        d.total()
    ));
    svg.push_str("</svg>\n");
    svg
}
