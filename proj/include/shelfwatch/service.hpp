#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "shelfwatch/config.hpp"
#include "shelfwatch/ingest.hpp"
#include "shelfwatch/jpeg.hpp"
#include "shelfwatch/search.hpp"

namespace shelfwatch {

// Bounded FIFO job queue feeding the processing workers.
class JobQueue {
public:
    explicit JobQueue(std::size_t capacity) : capacity_(capacity) {}

    struct Job {
        std::string job_id;
        std::string device_id;
    };

    bool push(Job job) {
        std::lock_guard lock(mutex_);
        if (closed_ || jobs_.size() >= capacity_) return false;
        jobs_.push_back(std::move(job));
        ready_.notify_one();
        return true;
    }

    std::optional<Job> pop() {
        std::unique_lock lock(mutex_);
        ready_.wait(lock, [&] { return closed_ || !jobs_.empty(); });
        if (jobs_.empty()) return std::nullopt;
        Job job = std::move(jobs_.front());
        jobs_.pop_front();
        return job;
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        ready_.notify_all();
    }

private:
    std::size_t capacity_;
    std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<Job> jobs_;
    bool closed_ = false;
};

// HTTP surface of the compliance pipeline:
//   POST /v1/shelf-image   device id + token headers, JPEG body -> job id
//   GET  /v1/report/{job}  alignment report once processed
//   GET  /v1/health
// Uploads are persisted content-addressed before processing; the job id is
// the image content hash, so duplicate uploads collapse onto one job.
class ComplianceService {
public:
    explicit ComplianceService(ServiceConfig config)
        : config_(std::move(config)),
          store_(config_.storage_root),
          queue_(config_.queue_capacity),
          detector_(make_detector(config_.providers)),
          features_(make_features(config_.providers)) {
        if (!config_.catalog_path.empty()) catalog_ = load_catalog(config_.catalog_path);
        install_routes();
    }

    ~ComplianceService() { stop(); }

    // Binds, spawns workers and the listener thread, returns the bound port.
    int start() {
        int port = config_.port;
        if (port == 0) {
            port = server_.bind_to_any_port("0.0.0.0");
            if (port < 0) throw std::runtime_error("service: cannot bind to any port");
        } else if (!server_.bind_to_port("0.0.0.0", port)) {
            throw std::runtime_error("service: cannot bind to port " + std::to_string(port));
        }
        bound_port_ = port;

        for (int i = 0; i < config_.workers; ++i)
            workers_.emplace_back([this] { worker_loop(); });
        listener_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return port;
    }

    void stop() {
        if (stopped_.exchange(true)) return;
        server_.stop();
        queue_.close();
        if (listener_.joinable()) listener_.join();
        for (auto& w : workers_)
            if (w.joinable()) w.join();
    }

    int port() const { return bound_port_; }
    ObjectStore& store() { return store_; }

private:
    static void reply(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    void install_routes() {
        server_.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
            reply(res, 200, {{"status", "ok"}});
        });

        server_.Post("/v1/shelf-image", [this](const httplib::Request& req, httplib::Response& res) {
            handle_upload(req, res);
        });

        server_.Get(R"(/v1/report/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
            const std::string job_id = req.matches[1];
            if (auto report = store_.find_report(job_id)) {
                reply(res, 200, *report);
                return;
            }
            {
                std::lock_guard lock(jobs_mutex_);
                if (known_jobs_.count(job_id)) {
                    reply(res, 202, {{"job_id", job_id}, {"status", "pending"}});
                    return;
                }
            }
            reply(res, 404, {{"error", "unknown job"}});
        });
    }

    void handle_upload(const httplib::Request& req, httplib::Response& res) {
        if (!config_.token.empty() && req.get_header_value("X-Auth-Token") != config_.token) {
            reply(res, 401, {{"error", "bad token"}});
            return;
        }
        const std::string device_id = req.get_header_value("X-Device-Id");
        if (!config_.devices.count(device_id)) {
            reply(res, 403, {{"error", "unknown device '" + device_id + "'"}});
            return;
        }

        const auto* bytes = reinterpret_cast<const std::uint8_t*>(req.body.data());
        try {
            decode_jpeg({bytes, req.body.size()});
        } catch (const std::exception& e) {
            reply(res, 400, {{"error", std::string("undecodable image: ") + e.what()}});
            return;
        }

        const std::string job_id = store_.put({bytes, req.body.size()});
        {
            std::lock_guard lock(jobs_mutex_);
            if (known_jobs_.count(job_id)) {
                reply(res, 200, {{"job_id", job_id}, {"status", "duplicate"}});
                return;
            }
            known_jobs_.insert(job_id);
        }
        if (!queue_.push({job_id, device_id})) {
            std::lock_guard lock(jobs_mutex_);
            known_jobs_.erase(job_id);
            reply(res, 503, {{"error", "queue full"}});
            return;
        }
        reply(res, 200, {{"job_id", job_id}, {"status", "queued"}});
    }

    void worker_loop() {
        while (auto job = queue_.pop()) {
            json report;
            try {
                report = process(*job);
            } catch (const std::exception& e) {
                report = {{"device", job->device_id}, {"error", e.what()}};
            }
            store_.append_report(job->job_id, report);
        }
    }

    json process(const JobQueue::Job& job) {
        const auto bytes = store_.get(job.job_id);
        const Image shelf = decode_jpeg(bytes);
        const auto& device = config_.devices.at(job.device_id);

        json report{{"device", job.device_id},
                    {"image_sha256", job.job_id},
                    {"source", {{"width", shelf.width}, {"height", shelf.height}}},
                    {"racks", json::array()}};

        const auto racks = split_racks(shelf, device.rack_count, config_.rack_height);
        for (std::size_t i = 0; i < racks.size(); ++i) {
            const auto& rack = racks[i];
            const auto padded = pad_for_detector(rack.image, config_.detector_side,
                                                 config_.pipeline.change.blur);

            json rj{{"index", i},
                    {"source_rows", {rack.source_row_begin, rack.source_row_end}},
                    {"width", rack.image.width},
                    {"height", rack.image.height},
                    {"letterbox",
                     {{"scale", padded.transform.scale},
                      {"dx", padded.transform.dx},
                      {"dy", padded.transform.dy},
                      {"side", config_.detector_side}}}};

            if (i < device.references.size()) {
                RackScene scene{job.job_id + ":" + std::to_string(i),
                                static_cast<double>(rack.image.width),
                                static_cast<double>(rack.image.height),
                                ""};
                try {
                    const auto result = run_search(scene, device.references[i], catalog_, *detector_,
                                                   *features_, config_.pipeline.search);
                    rj["mu"] = result.alignment.mu;
                    rj["alignment"] = alignment_report(result.alignment);
                } catch (const std::exception& e) {
                    rj["error"] = e.what();
                }
            }
            report["racks"].push_back(std::move(rj));
        }
        return report;
    }

    ServiceConfig config_;
    ObjectStore store_;
    JobQueue queue_;
    std::unique_ptr<DetectorProvider> detector_;
    std::unique_ptr<FeatureProvider> features_;
    Catalog catalog_;

    httplib::Server server_;
    std::thread listener_;
    std::vector<std::thread> workers_;
    std::mutex jobs_mutex_;
    std::set<std::string> known_jobs_;
    std::atomic<bool> stopped_{false};
    int bound_port_ = 0;
};

}  // namespace shelfwatch
