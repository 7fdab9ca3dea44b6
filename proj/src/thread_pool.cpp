#include <tmreach/thread_pool.hpp>

namespace tmreach
{

ThreadPool::ThreadPool(unsigned threads)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    workers_.reserve(threads - 1);
    for (unsigned i = 1; i < threads; ++i) {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

ThreadPool::~ThreadPool()
{
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto &w : workers_) {
        w.join();
    }
}

void ThreadPool::drain()
{
    std::unique_lock lock(mutex_);
    while (next_ < n_) {
        const std::size_t i = next_++;
        const auto *body = body_;
        lock.unlock();
        std::exception_ptr err;
        try {
            (*body)(i);
        } catch (...) {
            err = std::current_exception();
        }
        lock.lock();
        if (err && (!error_ || i < error_index_)) {
            error_ = err;
            error_index_ = i;
        }
        if (++finished_ == n_) {
            done_.notify_all();
        }
    }
}

void ThreadPool::worker_loop()
{
    std::size_t seen = 0;
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) {
                return;
            }
            seen = generation_;
        }
        drain();
    }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
{
    if (n == 0) {
        return;
    }
    if (workers_.empty() || n == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::lock_guard run(run_mutex_);
    {
        std::lock_guard lock(mutex_);
        body_ = &body;
        n_ = n;
        next_ = 0;
        finished_ = 0;
        error_ = nullptr;
        ++generation_;
    }
    wake_.notify_all();
    drain();
    std::exception_ptr err;
    {
        std::unique_lock lock(mutex_);
        done_.wait(lock, [&] { return finished_ == n_; });
        err = error_;
        error_ = nullptr;
        n_ = 0;
        body_ = nullptr;
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

} // namespace tmreach
