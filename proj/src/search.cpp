#include "sse/search.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace sse {

bool node_equiv(const SearchNode& a, const SearchNode& b) {
    return a.value == b.value && a.level == b.level;
}

int node_cmp(const SearchNode& a, const SearchNode& b) {
    const int aa = a.attacked_count();
    const int ab = b.attacked_count();
    if (aa != ab) { return aa < ab ? 1 : -1; }
    if (a.level != b.level) { return a.level > b.level ? 1 : -1; }
    return 0;
}

SearchContext::SearchContext(const StackedWindow& window, const LtiSystem& sys,
                             std::vector<double> w_bars, double epsilon)
    : window_(window),
      full_obs_(build_observability(sys, window.T)),
      w_bars_(std::move(w_bars)),
      epsilon_(epsilon),
      p_(sys.p()),
      n_(sys.n()),
      T_(window.T) {
    if (window.p != p_) { throw std::invalid_argument("window and system disagree on sensor count"); }
    if (window.Y.size() != static_cast<Eigen::Index>(T_) * p_) {
        throw std::invalid_argument("window length inconsistent with T*p");
    }
    if (static_cast<int>(w_bars_.size()) != p_) {
        throw std::invalid_argument("need one noise bound per sensor");
    }
    if (epsilon_ < 0.0) { throw std::invalid_argument("epsilon must be nonnegative"); }
}

bool SearchContext::feasible(const SensorSet& I) const {
    auto it = cache_.find(I.bits());
    if (it != cache_.end()) { return it->second; }
    const double w_bar_I = combine_noise_bound(w_bars_, I);
    ++solves_;
    const bool ok =
        is_feasible(stack_and_restrict(window_, I), restrict(full_obs_, I), w_bar_I, epsilon_);
    cache_.emplace(I.bits(), ok);
    return ok;
}

ResidualResult SearchContext::solve(const SensorSet& I) const {
    ++solves_;
    return min_residual(stack_and_restrict(window_, I), restrict(full_obs_, I));
}

SearchNode get_child(const SearchNode& parent, int parent_index, int id, const SearchContext& ctx) {
    if (parent.level >= ctx.p()) { throw std::logic_error("cannot expand a node at the last level"); }
    if (id != 0 && id != 1) { throw std::invalid_argument("child id must be 0 or 1"); }
    SearchNode child;
    child.level = parent.level + 1;
    child.value = id;
    child.parent = parent_index;
    if (id == 0) {
        child.attack_free = parent.attack_free.with(child.level);
        child.residual = ctx.feasible(child.attack_free) ? 0 : 1;
    } else {
        child.attack_free = parent.attack_free;
        child.residual = parent.residual;
    }
    return child;
}

namespace {

/// Max-priority queue over arena indices with FIFO tie-break.
class NodeQueue {
  public:
    explicit NodeQueue(const std::vector<SearchNode>* arena) : arena_(arena) {}

    [[nodiscard]] bool empty() const { return heap_.empty(); }

    void push(int idx) {
        heap_.push_back(idx);
        std::push_heap(heap_.begin(), heap_.end(), [this](int a, int b) { return lower(a, b); });
    }

    int pop() {
        std::pop_heap(heap_.begin(), heap_.end(), [this](int a, int b) { return lower(a, b); });
        const int idx = heap_.back();
        heap_.pop_back();
        return idx;
    }

    /// Contents best-first (copy; used only for trace snapshots).
    [[nodiscard]] std::vector<int> sorted() const {
        std::vector<int> out = heap_;
        std::sort(out.begin(), out.end(), [this](int a, int b) { return lower(b, a); });
        return out;
    }

  private:
    bool lower(int a, int b) const {
        const int c = node_cmp((*arena_)[static_cast<std::size_t>(a)], (*arena_)[static_cast<std::size_t>(b)]);
        if (c != 0) { return c < 0; }
        return (*arena_)[static_cast<std::size_t>(a)].seq > (*arena_)[static_cast<std::size_t>(b)].seq;
    }

    std::vector<int> heap_;
    const std::vector<SearchNode>* arena_;
};

class GraphSearch {
  public:
    GraphSearch(const StackedWindow& window, const LtiSystem& sys, const std::vector<double>& w_bars,
                double epsilon, int s_bar, SearchMode mode, bool tracing)
        : ctx_(window, sys, w_bars, epsilon),
          s_bar_(s_bar),
          mode_(mode),
          tracing_(tracing),
          frontier_(&arena_),
          repo_(&arena_),
          frontier_count_(static_cast<std::size_t>(ctx_.p() + 1) * 2, 0),
          explored_count_(static_cast<std::size_t>(ctx_.p() + 1) * 2, 0) {
        if (mode == SearchMode::Exact && s_bar < 0) {
            throw std::invalid_argument("s_bar must be nonnegative in exact mode");
        }
    }

    TraceResult run() {
        const auto start = std::chrono::steady_clock::now();
        arena_.push_back(SearchNode{});  // root: level 0, value 1, I = {}, residual 0
        push_frontier(0);
        snapshot();

        TraceResult out;
        while (true) {
            if (frontier_.empty() && repo_.empty()) {
                out.result = failure_result();
                break;
            }
            if (frontier_.empty()) {
                const int promoted = repo_.pop();
                clear_explored();
                push_frontier(promoted);
                ++stats_.repo_promotions;
            }

            const int idx = pop_frontier();
            ++iterations_;
            note_pop(idx);

            if (arena_[static_cast<std::size_t>(idx)].level == ctx_.p()) {
                out.result = accept(idx);
                add_explored(idx);  // final snapshot shows the accepted node as expanded
                snapshot();
                break;
            }
            add_explored(idx);
            expand(idx);
            snapshot();
        }

        out.result.runtime = std::chrono::steady_clock::now() - start;
        out.result.stats = stats_;
        out.result.stats.residual_solves = ctx_.solves();
        out.result.iterations = iterations_;
        out.log = std::move(log_);
        return out;
    }

  private:
    static std::size_t class_of(const SearchNode& v) {
        return static_cast<std::size_t>(v.level) * 2 + static_cast<std::size_t>(v.value);
    }

    void push_frontier(int idx) {
        frontier_.push(idx);
        ++frontier_count_[class_of(arena_[static_cast<std::size_t>(idx)])];
    }

    int pop_frontier() {
        const int idx = frontier_.pop();
        --frontier_count_[class_of(arena_[static_cast<std::size_t>(idx)])];
        return idx;
    }

    void add_explored(int idx) {
        explored_.push_back(idx);
        ++explored_count_[class_of(arena_[static_cast<std::size_t>(idx)])];
    }

    void clear_explored() {
        explored_.clear();
        std::fill(explored_count_.begin(), explored_count_.end(), 0);
    }

    void note_pop(int idx) {
        const SearchNode& v = arena_[static_cast<std::size_t>(idx)];
        if (!popped_.emplace(v.attack_free.bits(), v.level * 2 + v.value).second) {
            ++stats_.duplicate_pops;
        }
        const std::size_t cls = class_of(v);
        // The popped node still counts as present for this instant's check.
        if (frontier_count_[cls] + explored_count_[cls] + 1 > 1) { ++stats_.class_collisions; }
    }

    void expand(int parent_idx) {
        for (int id = 0; id <= 1; ++id) {
            SearchNode child = get_child(arena_[static_cast<std::size_t>(parent_idx)], parent_idx, id, ctx_);
            if (child.residual != 0) { continue; }
            const int attacked = child.attacked_count();
            if (mode_ == SearchMode::Exact) {
                if (attacked > s_bar_) { continue; }
            } else {
                if (attacked >= (ctx_.p() + 1) / 2) { continue; }
            }
            child.seq = arena_.size();
            const std::size_t cls = class_of(child);
            arena_.push_back(std::move(child));
            const int idx = static_cast<int>(arena_.size()) - 1;
            if (frontier_count_[cls] + explored_count_[cls] > 0) {
                repo_.push(idx);
                ++stats_.repo_pushes;
            } else {
                push_frontier(idx);
            }
        }
    }

    EstimationResult accept(int idx) {
        const SearchNode& v = arena_[static_cast<std::size_t>(idx)];
        EstimationResult r;
        r.attack_free = v.attack_free;
        r.attacked = v.attack_free.complement(ctx_.p());
        r.x_hat = ctx_.solve(v.attack_free).x_hat;
        r.status = SearchStatus::Solved;
        return r;
    }

    EstimationResult failure_result() const {
        EstimationResult r;
        r.x_hat = Vector::Zero(ctx_.n());
        r.status = SearchStatus::Failure;
        return r;
    }

    void snapshot() {
        if (!tracing_) { return; }
        TraceEntry entry;
        entry.iteration = static_cast<int>(log_.size()) + 1;
        for (int idx : frontier_.sorted()) { entry.frontier.push_back(view(idx)); }
        for (int idx : explored_) { entry.explored.push_back(view(idx)); }
        for (int idx : repo_.sorted()) { entry.repo.push_back(view(idx)); }
        log_.push_back(std::move(entry));
    }

    TraceNode view(int idx) const {
        const SearchNode& v = arena_[static_cast<std::size_t>(idx)];
        return TraceNode{v.level, v.value, v.attack_free.to_vector(), v.residual};
    }

    SearchContext ctx_;
    int s_bar_;
    SearchMode mode_;
    bool tracing_;

    std::vector<SearchNode> arena_;
    NodeQueue frontier_;
    NodeQueue repo_;
    std::vector<int> explored_;
    std::vector<int> frontier_count_;
    std::vector<int> explored_count_;
    std::set<std::pair<std::uint64_t, int>> popped_;

    std::uint64_t iterations_ = 0;
    SearchStats stats_;
    std::vector<TraceEntry> log_;
};

}  // namespace

EstimationResult secure_estimate(const StackedWindow& window, const LtiSystem& sys,
                                 const std::vector<double>& w_bars, double epsilon, int s_bar,
                                 SearchMode mode) {
    return GraphSearch(window, sys, w_bars, epsilon, s_bar, mode, /*tracing=*/false).run().result;
}

TraceResult trace_search(const StackedWindow& window, const LtiSystem& sys,
                         const std::vector<double>& w_bars, double epsilon, int s_bar,
                         SearchMode mode) {
    return GraphSearch(window, sys, w_bars, epsilon, s_bar, mode, /*tracing=*/true).run();
}

}  // namespace sse
