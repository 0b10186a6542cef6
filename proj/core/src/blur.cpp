#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "perfsage/errors.hpp"
#include "perfsage/variants.hpp"

namespace perfsage::kernels {

// Loop structure mirrors a split/tile/vectorize schedule: the output plane is
// tiled s2 wide by s3 tall and tiles run in parallel; inside a tile the
// horizontal pass is recomputed (including the two-row halo) with its inner
// loop split by s1, and the vertical pass's inner loop is split by s4. The
// horizontal rows live in a three-row rolling window so scratch stays small.
// Every element is the same (a+b+c)/3 expression, so all schedules agree
// numerically; only the runtime changes.
Matrix blur_tiled(const Matrix& image, const ScheduleCandidate& schedule, int n_thd) {
    if (image.rows != image.cols)
        throw ParamError("blur expects a square image");
    if (image.rows < 4)
        throw ParamError("blur image side must be >= 4");
    if (!schedule.is_pow2())
        throw ParamError("blur schedule factors must be positive powers of two");

    const std::size_t n = image.rows;
    const std::size_t width = n - 2;   // output x extent
    const std::size_t height = n - 2;  // output y extent
    const std::size_t s1 = schedule.s1, s2 = schedule.s2, s3 = schedule.s3,
                      s4 = schedule.s4;

    Matrix out(height, width);
    const std::size_t x_tiles = (width + s2 - 1) / s2;
    const std::size_t y_tiles = (height + s3 - 1) / s3;
    const std::size_t total_tiles = x_tiles * y_tiles;
    const std::size_t workers = std::min<std::size_t>(
        std::max(n_thd, 1), std::max<std::size_t>(total_tiles, 1));
    const std::size_t scratch_w = std::min(s2, width);

    std::atomic<std::size_t> next_tile{0};
    auto worker = [&] {
        std::vector<double> window(3 * scratch_w);
        // Horizontal 3-point mean of image row gy over the tile's x range,
        // inner loop split by s1.
        auto blur_row = [&](std::size_t gy, std::size_t x0, std::size_t tw,
                            double* row) {
            const double* src = &image.data[gy * n];
            for (std::size_t xo = 0; xo < tw; xo += s1) {
                const std::size_t xe = std::min(tw, xo + s1);
                for (std::size_t xi = xo; xi < xe; ++xi) {
                    const std::size_t gx = x0 + xi;
                    row[xi] = (src[gx] + src[gx + 1] + src[gx + 2]) / 3.0;
                }
            }
        };
        for (;;) {
            const std::size_t t = next_tile.fetch_add(1, std::memory_order_relaxed);
            if (t >= total_tiles) break;
            const std::size_t ty = t / x_tiles, tx = t % x_tiles;
            const std::size_t x0 = tx * s2, x1 = std::min(width, x0 + s2);
            const std::size_t y0 = ty * s3, y1 = std::min(height, y0 + s3);
            const std::size_t tw = x1 - x0;

            double* rows[3] = {window.data(), window.data() + scratch_w,
                               window.data() + 2 * scratch_w};
            blur_row(y0, x0, tw, rows[0]);
            blur_row(y0 + 1, x0, tw, rows[1]);
            for (std::size_t y = y0; y < y1; ++y) {
                blur_row(y + 2, x0, tw, rows[2]);
                double* dst = &out.data[y * width + x0];
                for (std::size_t xo = 0; xo < tw; xo += s4) {
                    const std::size_t xe = std::min(tw, xo + s4);
                    for (std::size_t xi = xo; xi < xe; ++xi)
                        dst[xi] = (rows[0][xi] + rows[1][xi] + rows[2][xi]) / 3.0;
                }
                double* recycled = rows[0];
                rows[0] = rows[1];
                rows[1] = rows[2];
                rows[2] = recycled;
            }
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

}  // namespace perfsage::kernels
